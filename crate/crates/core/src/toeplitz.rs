//! Truncated Toeplitz matrices over an orthonormalized truncation, their
//! commutators, and the jackknife error model for stochastic assemblies.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{assemble_moment_chunks, zero_cross_weight, BasisHandle, MomentChunks};
use crate::domains::{DomainDescriptor, DomainPoint};
use crate::error::CoreError;
use crate::linalg::{frobenius_norm, invert_upper_triangular, spectral_norm};
use crate::quadrature::QuadratureRule;
use crate::symbols::SymbolSpec;
use crate::Result;

/// Whether a number was produced by an exact rule or estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Observed,
}

/// Where a matrix came from: symbol, rule, and seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub symbol: String,
    pub rule: String,
    pub seed: Option<u64>,
    pub exactness: Exactness,
}

/// A dense operator matrix over one basis truncation.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub basis_id: String,
    pub lambda: f64,
    pub meta: Provenance,
    /// max(0, ||T||_2 - esssup bound); the compression of a bounded
    /// multiplier cannot exceed its bound beyond integration error.
    pub norm_bound_defect: f64,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    fn check_compatible(&self, other: &OperatorMatrix) -> Result<()> {
        if self.basis_id != other.basis_id {
            return Err(CoreError::BasisMismatch(
                self.basis_id.clone(),
                other.basis_id.clone(),
            ));
        }
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

pub fn rule_description(rule: &QuadratureRule) -> String {
    format!(
        "{:?}[nodes={}, exact_degree={:?}, ess={:.1}]",
        rule.kind,
        rule.len(),
        rule.exactness_degree,
        rule.ess
    )
}

fn exactness_of(rule: &QuadratureRule) -> Exactness {
    if rule.exactness_degree.is_some() {
        Exactness::Exact
    } else {
        Exactness::Observed
    }
}

/// Builds T with entry(i,j) = <phi e_j, e_i> from moment chunks that were
/// already zeroed/symmetrized as the symbol requires.
fn toeplitz_from_moments(
    basis: &BasisHandle,
    moments: &DMatrix<Complex64>,
    real_symbol: bool,
) -> DMatrix<Complex64> {
    let u = &basis.transform;
    let t = u.adjoint() * moments * u;
    if real_symbol {
        // Force the Hermitian symmetry the exact operator has.
        (&t + t.adjoint()) * Complex64::new(0.5, 0.0)
    } else {
        t
    }
}

/// Assembles the truncated Toeplitz matrix of a symbol against the same
/// rule that built the basis.
pub fn toeplitz_matrix(
    basis: &BasisHandle,
    symbol: &SymbolSpec,
    rule: &QuadratureRule,
) -> Result<OperatorMatrix> {
    rule.check_matches(&basis.domain, basis.lambda)?;
    if symbol.domain.kind != basis.domain.kind {
        return Err(CoreError::BasisMismatch(
            format!("symbol on {:?}", symbol.domain.kind),
            format!("basis on {:?}", basis.domain.kind),
        ));
    }
    let eval = symbol.evaluator();
    let chunks = assemble_moment_chunks(rule, &basis.index_list, Some(&eval))?;
    let mut m = chunks.total();
    if symbol.zeroes_cross_weight() {
        zero_cross_weight(&mut m, &basis.index_list);
    }
    let entries = toeplitz_from_moments(basis, &m, symbol.is_real());
    let norm_bound_defect = (spectral_norm(&entries) - symbol.esssup_bound).max(0.0);
    Ok(OperatorMatrix {
        entries,
        basis_id: basis.basis_id.clone(),
        lambda: basis.lambda,
        meta: Provenance {
            symbol: symbol.describe(),
            rule: rule_description(rule),
            seed: rule.seed,
            exactness: exactness_of(rule),
        },
        norm_bound_defect,
    })
}

/// Both norms of AB - BA.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CommutatorNorms {
    pub spectral: f64,
    pub frobenius: f64,
}

pub fn commutator_norm(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<CommutatorNorms> {
    a.check_compatible(b)?;
    let c = &a.entries * &b.entries - &b.entries * &a.entries;
    Ok(CommutatorNorms {
        spectral: spectral_norm(&c),
        frobenius: frobenius_norm(&c),
    })
}

/// Commutation call for one symbol pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Exact rule: below the stated tolerance. Stochastic: below 3 SE.
    Commuting,
    /// Exact rule: above tolerance. Stochastic: above 10 SE.
    Noncommuting,
    /// Stochastic gray zone between 3 and 10 SE.
    Inconclusive,
}

/// Full pipeline result for one symbol pair on one truncation.
#[derive(Clone, Debug)]
pub struct CommutatorStudy {
    pub basis_id: String,
    pub dim: usize,
    pub symbol_a: String,
    pub symbol_b: String,
    pub norms: CommutatorNorms,
    /// Delete-one-chunk jackknife SE of the commutator matrix in Frobenius
    /// norm, propagated through Gram, Cholesky, and both assemblies.
    pub se_frobenius: Option<f64>,
    pub verdict: Verdict,
    pub exactness: Exactness,
    pub exact_tolerance: f64,
    pub ess: f64,
    pub acceptance_rate: f64,
    pub operator_a: OperatorMatrix,
    pub operator_b: OperatorMatrix,
}

/// Spectral-to-SE multiples defining the stochastic verdict bands.
pub const NONZERO_SE_MULTIPLE: f64 = 10.0;
pub const ZERO_SE_MULTIPLE: f64 = 3.0;

/// Runs the whole commutator pipeline for two symbols over one shared
/// rule: Gram, orthonormalization, both Toeplitz matrices, commutator
/// norms, and (for chunked stochastic rules) a delete-one-chunk jackknife
/// of the commutator matrix that feeds the verdict bands.
pub fn commutator_study(
    domain: &DomainDescriptor,
    lambda: f64,
    cutoff: u32,
    rule: &QuadratureRule,
    symbol_a: &SymbolSpec,
    symbol_b: &SymbolSpec,
    exact_tolerance: f64,
) -> Result<CommutatorStudy> {
    let basis = BasisHandle::build(domain, lambda, cutoff, rule)?;
    let op_a = toeplitz_matrix(&basis, symbol_a, rule)?;
    let op_b = toeplitz_matrix(&basis, symbol_b, rule)?;
    let norms = commutator_norm(&op_a, &op_b)?;

    let exactness = exactness_of(rule);
    let (se, verdict) = match exactness {
        Exactness::Exact => {
            let v = if norms.spectral < exact_tolerance {
                Verdict::Commuting
            } else {
                Verdict::Noncommuting
            };
            (None, v)
        }
        Exactness::Observed => {
            let se = jackknife_commutator_se(&basis, rule, symbol_a, symbol_b)?;
            let v = if norms.spectral > NONZERO_SE_MULTIPLE * se {
                Verdict::Noncommuting
            } else if norms.spectral < ZERO_SE_MULTIPLE * se {
                Verdict::Commuting
            } else {
                Verdict::Inconclusive
            };
            (Some(se), v)
        }
    };

    Ok(CommutatorStudy {
        basis_id: basis.basis_id.clone(),
        dim: basis.dim(),
        symbol_a: symbol_a.describe(),
        symbol_b: symbol_b.describe(),
        norms,
        se_frobenius: se,
        verdict,
        exactness,
        exact_tolerance,
        ess: rule.ess,
        acceptance_rate: rule.acceptance_rate,
        operator_a: op_a,
        operator_b: op_b,
    })
}

/// Delete-one-chunk jackknife of the commutator matrix: every replicate
/// re-runs the full pipeline (Gram, Cholesky inverse, both Toeplitz
/// compressions, commutator) on the rule with one chunk removed, and the
/// spread of the replicate matrices in Frobenius norm is the propagated
/// standard error.
fn jackknife_commutator_se(
    basis: &BasisHandle,
    rule: &QuadratureRule,
    symbol_a: &SymbolSpec,
    symbol_b: &SymbolSpec,
) -> Result<f64> {
    let k = rule.n_chunks();
    if k < 2 {
        return Err(CoreError::Quadrature(
            "jackknife needs at least two chunks".into(),
        ));
    }
    let indices = &basis.index_list;
    let gram_chunks =
        assemble_moment_chunks(rule, indices, None::<&fn(&DomainPoint) -> Complex64>)?;
    let ea = symbol_a.evaluator();
    let eb = symbol_b.evaluator();
    let a_chunks = assemble_moment_chunks(rule, indices, Some(&ea))?;
    let b_chunks = assemble_moment_chunks(rule, indices, Some(&eb))?;

    let mut replicates = Vec::with_capacity(k);
    for c in 0..k {
        // A chunk with no accepted draws carries no information; deleting
        // it reproduces the full estimate, which is what delete_one gives.
        let rep = pipeline_replicate(
            basis, &gram_chunks, &a_chunks, &b_chunks, symbol_a, symbol_b, c,
        )?;
        replicates.push(rep);
    }
    let dim = replicates[0].nrows();
    let mut mean = DMatrix::<Complex64>::zeros(dim, dim);
    for r in &replicates {
        mean += r;
    }
    mean /= Complex64::new(k as f64, 0.0);
    let mut ss = 0.0;
    for r in &replicates {
        ss += (r - &mean).norm_squared();
    }
    Ok(((k as f64 - 1.0) / k as f64 * ss).sqrt())
}

fn pipeline_replicate(
    basis: &BasisHandle,
    gram_chunks: &MomentChunks,
    a_chunks: &MomentChunks,
    b_chunks: &MomentChunks,
    symbol_a: &SymbolSpec,
    symbol_b: &SymbolSpec,
    drop: usize,
) -> Result<DMatrix<Complex64>> {
    let indices = &basis.index_list;
    let mut g = gram_chunks.delete_one(drop);
    zero_cross_weight(&mut g, indices);
    let l = crate::linalg::cholesky_lower(&g)?;
    let u = invert_upper_triangular(&l.adjoint())?;

    let mut ma = a_chunks.delete_one(drop);
    if symbol_a.zeroes_cross_weight() {
        zero_cross_weight(&mut ma, indices);
    }
    let mut mb = b_chunks.delete_one(drop);
    if symbol_b.zeroes_cross_weight() {
        zero_cross_weight(&mut mb, indices);
    }
    let ta = u.adjoint() * ma * &u;
    let tb = u.adjoint() * mb * &u;
    Ok(&ta * &tb - &tb * &ta)
}
