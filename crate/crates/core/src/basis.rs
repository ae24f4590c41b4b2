//! Monomial Gram matrices, triangular orthonormalization, truncated
//! reproducing kernels, and the Bergman projection onto polynomial
//! truncations of the weighted space.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::domains::{DomainDescriptor, DomainPoint, MultiIndex};
use crate::error::CoreError;
use crate::linalg::{condition_number, invert_upper_triangular};
use crate::quadrature::{mc_sample, QuadratureRule};
use crate::Result;

/// Gram condition number beyond which truncation outruns integration
/// accuracy.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// Sample count for the fallback Monte Carlo rule behind `monomial_norm`.
pub const DEFAULT_NORM_MC_COUNT: usize = 200_000;
const DEFAULT_NORM_MC_SEED: u64 = 0x5EED_0001;

/// A norm or moment estimate with its sampling error, when stochastic.
#[derive(Clone, Copy, Debug)]
pub struct NormEstimate {
    pub value: f64,
    pub std_error: Option<f64>,
}

/// Cutoffs that keep full pipelines interactive on each stock domain.
pub fn default_cutoff(domain: &DomainDescriptor) -> u32 {
    let (r, c) = (domain.rows(), domain.cols());
    let (r, c) = (r.min(c), r.max(c));
    match (r, c) {
        (1, 1) => 16,
        (1, 2) => 10,
        (1, 3) => 6,
        (1, _) => 4,
        (2, 2) => 3,
        _ => 2,
    }
}

/// Squared monomial norm against the weighted measure.
///
/// Rank-one domains evaluate in closed radial form; matrix balls fall back
/// to a seeded Monte Carlo rule and report its standard error.
pub fn monomial_norm(
    domain: &DomainDescriptor,
    lambda: f64,
    alpha: &MultiIndex,
) -> Result<NormEstimate> {
    domain.check_lambda(lambda)?;
    if alpha.rows != domain.rows() || alpha.cols != domain.cols() {
        return Err(CoreError::ShapeMismatch(
            "multi-index shape does not match domain".into(),
        ));
    }
    if domain.rank == 1 {
        return Ok(NormEstimate {
            value: rank_one_norm(lambda, &alpha.entries),
            std_error: None,
        });
    }
    let rule = mc_sample(domain, lambda, DEFAULT_NORM_MC_COUNT, DEFAULT_NORM_MC_SEED)?;
    monomial_norm_with_rule(domain, lambda, alpha, &rule)
}

/// Squared monomial norm evaluated against a caller-supplied rule.
pub fn monomial_norm_with_rule(
    domain: &DomainDescriptor,
    lambda: f64,
    alpha: &MultiIndex,
    rule: &QuadratureRule,
) -> Result<NormEstimate> {
    domain.check_lambda(lambda)?;
    rule.check_matches(domain, lambda)?;
    let (value, se) = rule.integrate(|p| {
        let m = p.monomial(alpha);
        Complex64::new(m.norm_sqr(), 0.0)
    })?;
    Ok(NormEstimate {
        value: value.re,
        std_error: se,
    })
}

/// ||z^alpha||^2 = alpha! / (lambda)_(|alpha|) on a rank-one domain,
/// evaluated as a product of ratios to stay in range at high degree.
fn rank_one_norm(lambda: f64, alpha: &[u32]) -> f64 {
    let mut v = 1.0;
    let mut step = 0u32;
    for &aj in alpha {
        for i in 1..=aj {
            v *= i as f64 / (lambda + step as f64);
            step += 1;
        }
    }
    v
}

/// Per-chunk weighted moment matrices M_c with M_c[i][j] summing
/// w_k phi(z_k) conj(z_k^alpha_i) z_k^alpha_j over the chunk's nodes, in
/// the rule's normalized weights. Their fixed-order sum is the full moment
/// matrix; delete-one-chunk reweighting drives jackknife error bars.
#[derive(Clone, Debug)]
pub struct MomentChunks {
    pub chunks: Vec<DMatrix<Complex64>>,
    pub fractions: Vec<f64>,
    pub dim: usize,
}

impl MomentChunks {
    /// Full-rule moment matrix, summed in chunk order.
    pub fn total(&self) -> DMatrix<Complex64> {
        let mut acc = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for c in &self.chunks {
            acc += c;
        }
        acc
    }

    /// Moment matrix with chunk `c` removed and the remaining weight mass
    /// renormalized to 1.
    pub fn delete_one(&self, c: usize) -> DMatrix<Complex64> {
        let rest = 1.0 - self.fractions[c];
        let scale = Complex64::new(1.0 / rest, 0.0);
        (self.total() - &self.chunks[c]) * scale
    }

    pub fn n_chunks(&self) -> usize {
        self.chunks.len()
    }
}

/// Number of nodes evaluated per assembly block; bounds transient memory.
const ASSEMBLY_BLOCK: usize = 16_384;

/// Assembles per-chunk moment matrices for the given monomials and symbol
/// (None integrates the symbol 1, yielding Gram chunks). Each chunk matrix
/// is forced exactly Hermitian for real-valued symbols by averaging with
/// its adjoint.
pub fn assemble_moment_chunks<F>(
    rule: &QuadratureRule,
    indices: &[MultiIndex],
    phi: Option<&F>,
) -> Result<MomentChunks>
where
    F: Fn(&DomainPoint) -> Complex64 + ?Sized,
{
    if indices.is_empty() {
        return Err(CoreError::EmptyInput("no monomials to integrate".into()));
    }
    let dim = indices.len();
    let mut chunks = Vec::with_capacity(rule.n_chunks());
    let mut symbol_is_real = true;
    for c in 0..rule.n_chunks() {
        let range = rule.chunk_range(c);
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        let mut start = range.start;
        while start < range.end {
            let stop = (start + ASSEMBLY_BLOCK).min(range.end);
            let rows = stop - start;
            let mut e = DMatrix::<Complex64>::zeros(rows, dim);
            let mut f = DMatrix::<Complex64>::zeros(rows, dim);
            for (r, k) in (start..stop).enumerate() {
                let node = &rule.nodes[k];
                let pv = match phi {
                    Some(func) => func(node),
                    None => Complex64::new(1.0, 0.0),
                };
                if !pv.re.is_finite() || !pv.im.is_finite() {
                    return Err(CoreError::NonFiniteIntegrand { index: k });
                }
                if pv.im != 0.0 {
                    symbol_is_real = false;
                }
                let wp = pv * rule.weights[k];
                for (j, alpha) in indices.iter().enumerate() {
                    let m = node.monomial(alpha);
                    if !m.re.is_finite() || !m.im.is_finite() {
                        return Err(CoreError::NonFiniteIntegrand { index: k });
                    }
                    e[(r, j)] = m;
                    f[(r, j)] = m * wp;
                }
            }
            acc += e.adjoint() * f;
            start = stop;
        }
        chunks.push(acc);
    }
    if symbol_is_real {
        for c in &mut chunks {
            let sym = (&*c + c.adjoint()) * Complex64::new(0.5, 0.0);
            *c = sym;
        }
    }
    Ok(MomentChunks {
        chunks,
        fractions: rule.chunk_weight_fractions.clone(),
        dim,
    })
}

/// Sets entries between monomials of different torus weight to exactly
/// zero; the measure's torus invariance forces them to vanish.
pub fn zero_cross_weight(m: &mut DMatrix<Complex64>, indices: &[MultiIndex]) {
    let dim = indices.len();
    for i in 0..dim {
        for j in 0..dim {
            if !indices[i].same_torus_weight(&indices[j]) {
                m[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
}

/// Gram matrix of the monomials of degree <= cutoff against the rule's
/// measure, with cross-weight entries zeroed analytically.
pub fn gram_matrix(
    domain: &DomainDescriptor,
    lambda: f64,
    cutoff: u32,
    rule: &QuadratureRule,
) -> Result<DMatrix<Complex64>> {
    domain.check_lambda(lambda)?;
    rule.check_matches(domain, lambda)?;
    let indices = domain.multi_index_enumerate(cutoff);
    let chunks = assemble_moment_chunks(rule, &indices, None::<&fn(&DomainPoint) -> Complex64>)?;
    let mut g = chunks.total();
    zero_cross_weight(&mut g, &indices);
    let cond = condition_number(&g);
    if !(cond <= MAX_GRAM_CONDITION) {
        return Err(CoreError::IllConditioned { cond });
    }
    Ok(g)
}

/// Inverse upper Cholesky factor of a Hermitian PD Gram matrix: columns
/// express an orthonormal basis triangularly over the graded monomials.
pub fn orthonormal_basis(gram: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let l = crate::linalg::cholesky_lower(gram)?;
    invert_upper_triangular(&l.adjoint())
}

/// An orthonormalized polynomial truncation: index list, Gram matrix, and
/// the monomial-to-orthonormal change of basis.
#[derive(Clone, Debug)]
pub struct BasisHandle {
    pub domain: DomainDescriptor,
    pub lambda: f64,
    pub cutoff: u32,
    pub index_list: Vec<MultiIndex>,
    pub gram: DMatrix<Complex64>,
    /// Upper triangular; e_j(z) = sum_i transform[i][j] z^alpha_i.
    pub transform: DMatrix<Complex64>,
    /// Content hash of (domain, lambda, cutoff, rule parameters).
    pub basis_id: String,
    /// || transform^H gram transform - I ||, recorded at construction.
    pub orthonormality_defect: f64,
}

impl BasisHandle {
    /// Builds the truncation from one shared rule. Matrix-ball pipelines
    /// must reuse the same rule for every moment integral downstream so
    /// estimates stay correlated and the Gram stays positive definite.
    pub fn build(
        domain: &DomainDescriptor,
        lambda: f64,
        cutoff: u32,
        rule: &QuadratureRule,
    ) -> Result<Self> {
        let gram = gram_matrix(domain, lambda, cutoff, rule)?;
        let transform = orthonormal_basis(&gram)?;
        let index_list = domain.multi_index_enumerate(cutoff);
        let defect = {
            let id = DMatrix::<Complex64>::identity(gram.nrows(), gram.ncols());
            (transform.adjoint() * &gram * &transform - id).norm()
        };
        let basis_id = basis_content_hash(domain, lambda, cutoff, rule);
        Ok(Self {
            domain: *domain,
            lambda,
            cutoff,
            index_list,
            gram,
            transform,
            basis_id,
            orthonormality_defect: defect,
        })
    }

    pub fn dim(&self) -> usize {
        self.index_list.len()
    }

    /// Values of the orthonormal basis functions at a point.
    pub fn eval_orthonormal(&self, point: &DomainPoint) -> Result<DVector<Complex64>> {
        if point.value.nrows() != self.domain.rows() || point.value.ncols() != self.domain.cols()
        {
            return Err(CoreError::ShapeMismatch(
                "point shape does not match basis domain".into(),
            ));
        }
        let m = DVector::from_fn(self.dim(), |i, _| point.monomial(&self.index_list[i]));
        Ok(self.transform.transpose() * m)
    }
}

/// Stable identity for caching: hashes the domain, weight, cutoff, and the
/// rule's construction parameters, not floating node data.
fn basis_content_hash(
    domain: &DomainDescriptor,
    lambda: f64,
    cutoff: u32,
    rule: &QuadratureRule,
) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "{:?}|{}|{}|{:?}|{:?}|{:?}|{}",
        domain.kind,
        lambda.to_bits(),
        cutoff,
        rule.kind,
        rule.exactness_degree,
        rule.seed,
        rule.len()
    ));
    let digest = h.finalize();
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}

/// Truncated reproducing kernel sum_i e_i(z) conj(e_i(w)).
pub fn kernel_eval(basis: &BasisHandle, z: &DomainPoint, w: &DomainPoint) -> Result<Complex64> {
    if !basis.domain.contains(z)? || !basis.domain.contains(w)? {
        return Err(CoreError::OutsideDomain);
    }
    let a = basis.eval_orthonormal(z)?;
    let b = basis.eval_orthonormal(w)?;
    Ok(b.dotc(&a))
}

/// Coefficients of the Bergman projection of `f` in the orthonormal basis:
/// c_i = <f, e_i>. Evaluated against the supplied rule in chunk order.
pub fn bergman_project<F>(
    basis: &BasisHandle,
    f: F,
    rule: &QuadratureRule,
) -> Result<DVector<Complex64>>
where
    F: Fn(&DomainPoint) -> Complex64,
{
    rule.check_matches(&basis.domain, basis.lambda)?;
    let dim = basis.dim();
    let mut coeffs = DVector::<Complex64>::zeros(dim);
    for k in 0..rule.len() {
        let node = &rule.nodes[k];
        let fv = f(node);
        if !fv.re.is_finite() || !fv.im.is_finite() {
            return Err(CoreError::NonFiniteIntegrand { index: k });
        }
        let e = basis.eval_orthonormal(node)?;
        let w = rule.weights[k];
        for i in 0..dim {
            coeffs[i] += fv * e[i].conj() * w;
        }
    }
    Ok(coeffs)
}
