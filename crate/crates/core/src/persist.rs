//! Versioned JSON persistence: operator matrices with provenance,
//! quadrature rules for golden files, basis caches keyed by content hash,
//! group elements with their paths, and census exports. Derived structure
//! constants are always recomputed on load rather than trusted from input.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::basis::BasisHandle;
use crate::domains::{make_domain, DomainKind, DomainPoint, MultiIndex};
use crate::error::CoreError;
use crate::group::{GroupElement, PathData};
use crate::multiplicity::CensusReport;
use crate::quadrature::QuadratureRule;
use crate::toeplitz::{OperatorMatrix, Provenance};
use crate::Result;

pub const FORMAT_VERSION: u32 = 1;

fn parse_err(e: serde_json::Error) -> CoreError {
    CoreError::Persist(format!("json: {e}"))
}

fn version_check(version: u32, what: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(CoreError::Persist(format!(
            "{what} is format version {version}, this build reads {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

/// Dense complex matrix as row-major [re, im] pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let v = m[(r, c)];
                entries.push([v.re, v.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.entries.len() != self.rows * self.cols {
            return Err(CoreError::Persist(format!(
                "matrix says {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        Ok(DMatrix::from_fn(self.rows, self.cols, |r, c| {
            let [re, im] = self.entries[r * self.cols + c];
            Complex64::new(re, im)
        }))
    }
}

/// A quadrature rule in binary-free form for golden files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleExport {
    pub version: u32,
    pub kind: crate::quadrature::RuleKind,
    pub node_rows: usize,
    pub node_cols: usize,
    /// One row-major [re, im] list per node.
    pub nodes: Vec<Vec<[f64; 2]>>,
    pub weights: Vec<f64>,
    pub chunk_offsets: Vec<usize>,
    pub exactness_degree: Option<u32>,
    pub seed: Option<u64>,
    pub domain: Option<DomainKind>,
    pub lambda: Option<f64>,
    pub acceptance_rate: f64,
}

pub fn rule_to_json(rule: &QuadratureRule) -> Result<String> {
    let (node_rows, node_cols) = rule
        .nodes
        .first()
        .map(|n| (n.value.nrows(), n.value.ncols()))
        .ok_or_else(|| CoreError::EmptyInput("rule with no nodes".into()))?;
    let nodes = rule
        .nodes
        .iter()
        .map(|n| MatrixJson::from_matrix(&n.value).entries)
        .collect();
    let export = RuleExport {
        version: FORMAT_VERSION,
        kind: rule.kind,
        node_rows,
        node_cols,
        nodes,
        weights: rule.weights.clone(),
        chunk_offsets: rule.chunk_offsets.clone(),
        exactness_degree: rule.exactness_degree,
        seed: rule.seed,
        domain: rule.domain.map(|d| d.kind),
        lambda: rule.lambda,
        acceptance_rate: rule.acceptance_rate,
    };
    serde_json::to_string_pretty(&export).map_err(parse_err)
}

pub fn rule_from_json(text: &str) -> Result<QuadratureRule> {
    let export: RuleExport = serde_json::from_str(text).map_err(parse_err)?;
    version_check(export.version, "rule")?;
    let nodes: Result<Vec<DomainPoint>> = export
        .nodes
        .iter()
        .map(|entries| {
            MatrixJson {
                rows: export.node_rows,
                cols: export.node_cols,
                entries: entries.clone(),
            }
            .to_matrix()
            .map(DomainPoint::from_matrix)
        })
        .collect();
    let domain = export.domain.map(make_domain).transpose()?;
    QuadratureRule::from_raw(
        export.kind,
        nodes?,
        export.weights,
        export.chunk_offsets,
        export.exactness_degree,
        export.seed,
        domain,
        export.lambda,
        export.acceptance_rate,
    )
}

/// Cached basis: everything needed to rebuild the handle without touching
/// the integration rule again.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisExport {
    pub version: u32,
    pub domain: DomainKind,
    pub lambda: f64,
    pub cutoff: u32,
    /// Content hash of (domain, lambda, cutoff, rule parameters, seed);
    /// the cache key.
    pub basis_id: String,
    pub indices: Vec<Vec<u32>>,
    pub gram: MatrixJson,
    pub transform: MatrixJson,
    pub orthonormality_defect: f64,
}

pub fn basis_to_json(basis: &BasisHandle) -> Result<String> {
    let export = BasisExport {
        version: FORMAT_VERSION,
        domain: basis.domain.kind,
        lambda: basis.lambda,
        cutoff: basis.cutoff,
        basis_id: basis.basis_id.clone(),
        indices: basis.index_list.iter().map(|mi| mi.entries.clone()).collect(),
        gram: MatrixJson::from_matrix(&basis.gram),
        transform: MatrixJson::from_matrix(&basis.transform),
        orthonormality_defect: basis.orthonormality_defect,
    };
    serde_json::to_string_pretty(&export).map_err(parse_err)
}

pub fn basis_from_json(text: &str) -> Result<BasisHandle> {
    let export: BasisExport = serde_json::from_str(text).map_err(parse_err)?;
    version_check(export.version, "basis")?;
    let domain = make_domain(export.domain)?;
    let (rows, cols) = (domain.rows(), domain.cols());
    let index_list: Result<Vec<MultiIndex>> = export
        .indices
        .into_iter()
        .map(|entries| MultiIndex::new(rows, cols, entries))
        .collect();
    let index_list = index_list?;
    let expected = domain.multi_index_enumerate(export.cutoff);
    if index_list != expected {
        return Err(CoreError::Persist(
            "cached index list disagrees with the enumeration order".into(),
        ));
    }
    let gram = export.gram.to_matrix()?;
    let transform = export.transform.to_matrix()?;
    let dim = index_list.len();
    if gram.nrows() != dim || !gram.is_square() || transform.nrows() != dim || !transform.is_square()
    {
        return Err(CoreError::Persist("cached matrix shapes disagree".into()));
    }
    // Trust nothing derived: re-verify that the transform orthonormalizes
    // the stored Gram before handing the basis out.
    let residual = transform.adjoint() * &gram * &transform
        - DMatrix::<Complex64>::identity(dim, dim);
    let defect = crate::linalg::max_abs(&residual);
    if defect > (export.orthonormality_defect * 10.0).max(1e-8) {
        return Err(CoreError::Persist(format!(
            "cached transform fails orthonormality: defect {defect:.2e}"
        )));
    }
    Ok(BasisHandle {
        domain,
        lambda: export.lambda,
        cutoff: export.cutoff,
        index_list,
        gram,
        transform,
        basis_id: export.basis_id,
        orthonormality_defect: defect,
    })
}

pub fn save_basis(path: &Path, basis: &BasisHandle) -> Result<()> {
    std::fs::write(path, basis_to_json(basis)?)?;
    Ok(())
}

pub fn load_basis(path: &Path) -> Result<BasisHandle> {
    let text = std::fs::read_to_string(path)?;
    basis_from_json(&text)
}

/// Operator matrix with provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorExport {
    pub version: u32,
    pub basis_id: String,
    pub lambda: f64,
    pub meta: Provenance,
    pub norm_bound_defect: f64,
    pub matrix: MatrixJson,
}

pub fn operator_to_json(op: &OperatorMatrix) -> Result<String> {
    let export = OperatorExport {
        version: FORMAT_VERSION,
        basis_id: op.basis_id.clone(),
        lambda: op.lambda,
        meta: op.meta.clone(),
        norm_bound_defect: op.norm_bound_defect,
        matrix: MatrixJson::from_matrix(&op.entries),
    };
    serde_json::to_string_pretty(&export).map_err(parse_err)
}

pub fn operator_from_json(text: &str) -> Result<OperatorMatrix> {
    let export: OperatorExport = serde_json::from_str(text).map_err(parse_err)?;
    version_check(export.version, "operator")?;
    Ok(OperatorMatrix {
        entries: export.matrix.to_matrix()?,
        basis_id: export.basis_id,
        lambda: export.lambda,
        meta: export.meta,
        norm_bound_defect: export.norm_bound_defect,
    })
}

/// Group element with its path record, re-validated on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElementExport {
    pub version: u32,
    pub n: usize,
    pub m: usize,
    pub matrix: MatrixJson,
    pub generator: Option<MatrixJson>,
    pub path_time: Option<f64>,
    pub membership_defect: f64,
}

pub fn group_element_to_json(g: &GroupElement) -> Result<String> {
    let export = GroupElementExport {
        version: FORMAT_VERSION,
        n: g.n,
        m: g.m,
        matrix: MatrixJson::from_matrix(&g.matrix),
        generator: g.path.as_ref().map(|p| MatrixJson::from_matrix(&p.generator)),
        path_time: g.path.as_ref().map(|p| p.time),
        membership_defect: g.membership_defect,
    };
    serde_json::to_string_pretty(&export).map_err(parse_err)
}

pub fn group_element_from_json(text: &str) -> Result<GroupElement> {
    let export: GroupElementExport = serde_json::from_str(text).map_err(parse_err)?;
    version_check(export.version, "group element")?;
    let path = match (&export.generator, export.path_time) {
        (Some(gen), Some(time)) => Some(PathData {
            generator: gen.to_matrix()?,
            time,
        }),
        (None, None) => None,
        _ => {
            return Err(CoreError::Persist(
                "path needs both generator and time".into(),
            ))
        }
    };
    // Membership is re-checked, not trusted.
    GroupElement::new(export.matrix.to_matrix()?, export.n, export.m, path)
}

pub fn census_to_json(census: &CensusReport) -> Result<String> {
    #[derive(Serialize)]
    struct Versioned<'a> {
        version: u32,
        #[serde(flatten)]
        census: &'a CensusReport,
    }
    serde_json::to_string_pretty(&Versioned {
        version: FORMAT_VERSION,
        census,
    })
    .map_err(parse_err)
}

/// One row per weight: degree, row sums, column sums, multiplicity, and
/// the member multi-indices (exponents dash-joined, members space-joined).
pub fn census_to_csv(census: &CensusReport) -> String {
    let mut out = String::from("degree,row_sums,col_sums,multiplicity,members\n");
    let join = |v: &[u32]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    for entry in &census.entries {
        let members = entry
            .members
            .iter()
            .map(|mi| {
                mi.entries
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("-")
            })
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            entry.weight.degree(),
            join(&entry.weight.row_sums),
            join(&entry.weight.col_sums),
            entry.members.len(),
            members
        ));
    }
    out
}
