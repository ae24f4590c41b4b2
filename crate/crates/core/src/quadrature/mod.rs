//! Integration rules against the weighted measure: deterministic
//! radial-angular product rules for the ball family, seeded Monte Carlo for
//! matrix balls, and grids or samples on compact groups for averaging.
//!
//! Every rule is self-normalizing: weights sum to 1, so integrals are
//! computed as ratios and the measure's normalizing constant never appears.

mod ball;
mod jacobi;
mod montecarlo;
mod torus;

pub use ball::ball_radial_rule;
pub use jacobi::gauss_jacobi_unit;
pub use montecarlo::{haar_unitary_sample, mc_sample, MC_CHUNKS};
pub use torus::torus_rule;

use num_complex::Complex64;

use crate::domains::{DomainDescriptor, DomainPoint};
use crate::error::CoreError;
use crate::Result;

/// How a rule was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    /// Per-coordinate Gauss radial nodes times uniform angular grids.
    RadialAngular,
    /// Chunked importance sampling with density-ratio weights.
    MonteCarlo,
    /// Product trapezoid grid on a torus.
    TorusGrid,
    /// Random sample from the normalized Haar measure of a compact group.
    HaarSample,
}

/// Nodes and normalized weights for one integration task.
///
/// Domain rules carry the domain and lambda they were built for so
/// consumers can detect mismatched use; torus and Haar rules live on a
/// group instead and leave them unset. Nodes are stored in chunks (one
/// chunk for deterministic rules, independent streams for Monte Carlo) so
/// downstream consumers can delete-one-chunk jackknife derived quantities.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<DomainPoint>,
    /// Normalized weights, rescaled to sum to 1.
    pub weights: Vec<f64>,
    /// Degree integrated exactly (meaning depends on kind); None means
    /// stochastic.
    pub exactness_degree: Option<u32>,
    /// Seed of the generator for stochastic rules.
    pub seed: Option<u64>,
    /// Domain the rule integrates over, when it is a domain rule.
    pub domain: Option<DomainDescriptor>,
    /// Weight parameter baked into the node weights, when applicable.
    pub lambda: Option<f64>,
    /// Start offsets of each chunk in `nodes`; chunk k spans
    /// `chunk_offsets[k]..chunk_offsets[k+1]` with an implicit final bound.
    pub chunk_offsets: Vec<usize>,
    /// Fraction of total raw weight carried by each chunk.
    pub chunk_weight_fractions: Vec<f64>,
    /// Effective sample size (sum w)^2 / sum w^2 of the raw weights.
    pub ess: f64,
    /// Fraction of proposals accepted (1.0 for deterministic rules).
    pub acceptance_rate: f64,
}

impl QuadratureRule {
    /// Assembles a rule from raw (unnormalized) weights, normalizing with a
    /// compensated sum so the weights add to 1 at full precision.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw(
        kind: RuleKind,
        nodes: Vec<DomainPoint>,
        raw_weights: Vec<f64>,
        chunk_offsets: Vec<usize>,
        exactness_degree: Option<u32>,
        seed: Option<u64>,
        domain: Option<DomainDescriptor>,
        lambda: Option<f64>,
        acceptance_rate: f64,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(CoreError::EmptyInput("quadrature rule with no nodes".into()));
        }
        if nodes.len() != raw_weights.len() {
            return Err(CoreError::ShapeMismatch(
                "node and weight counts differ".into(),
            ));
        }
        if chunk_offsets.is_empty() || chunk_offsets[0] != 0 {
            return Err(CoreError::Quadrature("chunk offsets must start at 0".into()));
        }
        let total = kahan_sum(&raw_weights);
        if !(total > 0.0) || !total.is_finite() {
            return Err(CoreError::Quadrature(format!(
                "raw weights sum to {total}, cannot normalize"
            )));
        }
        let sum_sq: f64 = raw_weights.iter().map(|w| w * w).sum();
        let ess = total * total / sum_sq;
        let mut bounds = chunk_offsets.clone();
        bounds.push(nodes.len());
        let mut chunk_weight_fractions = Vec::with_capacity(chunk_offsets.len());
        for k in 0..chunk_offsets.len() {
            let slice = &raw_weights[bounds[k]..bounds[k + 1]];
            chunk_weight_fractions.push(kahan_sum(slice) / total);
        }
        let weights = raw_weights.iter().map(|w| w / total).collect();
        Ok(Self {
            kind,
            nodes,
            weights,
            exactness_degree,
            seed,
            domain,
            lambda,
            chunk_offsets,
            chunk_weight_fractions,
            ess,
            acceptance_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_chunks(&self) -> usize {
        self.chunk_offsets.len()
    }

    /// Node index range of chunk k.
    pub fn chunk_range(&self, k: usize) -> std::ops::Range<usize> {
        let start = self.chunk_offsets[k];
        let end = if k + 1 < self.chunk_offsets.len() {
            self.chunk_offsets[k + 1]
        } else {
            self.nodes.len()
        };
        start..end
    }

    /// Errors unless the rule was built for this domain and lambda.
    pub fn check_matches(&self, domain: &DomainDescriptor, lambda: f64) -> Result<()> {
        if let Some(d) = &self.domain {
            if d.rows() != domain.rows() || d.cols() != domain.cols() {
                return Err(CoreError::BasisMismatch(
                    format!("rule built for {:?}", d.kind),
                    format!("asked to integrate over {:?}", domain.kind),
                ));
            }
        }
        if let Some(l) = self.lambda {
            if l != lambda {
                return Err(CoreError::BasisMismatch(
                    format!("rule built at lambda {l}"),
                    format!("asked to integrate at lambda {lambda}"),
                ));
            }
        }
        Ok(())
    }

    /// Integral of f against the normalized measure, with a between-chunk
    /// standard error (None for single-chunk rules). Summation is
    /// compensated per chunk and combined in fixed chunk order, so the
    /// result does not depend on how callers partition work.
    ///
    /// Non-finite integrand values abort with the offending node index.
    pub fn integrate<F>(&self, mut f: F) -> Result<(Complex64, Option<f64>)>
    where
        F: FnMut(&DomainPoint) -> Complex64,
    {
        let k = self.n_chunks();
        let mut chunk_means = vec![Complex64::new(0.0, 0.0); k];
        for c in 0..k {
            let mut acc = KahanComplex::new();
            for i in self.chunk_range(c) {
                let v = f(&self.nodes[i]);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(CoreError::NonFiniteIntegrand { index: i });
                }
                acc.add(v * self.weights[i]);
            }
            // Chunk contribution rescaled to a full-measure estimate.
            let frac = self.chunk_weight_fractions[c];
            chunk_means[c] = if frac > 0.0 { acc.value() / frac } else { acc.value() };
        }
        let mut total = KahanComplex::new();
        for c in 0..k {
            total.add(chunk_means[c] * self.chunk_weight_fractions[c]);
        }
        if k < 2 {
            return Ok((total.value(), None));
        }
        let mean: Complex64 = chunk_means.iter().sum::<Complex64>() / k as f64;
        let var: f64 = chunk_means
            .iter()
            .map(|m| (m - mean).norm_sqr())
            .sum::<f64>()
            / (k as f64 - 1.0);
        let se = (var / k as f64).sqrt();
        Ok((total.value(), Some(se)))
    }
}

/// Compensated complex accumulator.
pub struct KahanComplex {
    sum: Complex64,
    comp: Complex64,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self {
            sum: Complex64::new(0.0, 0.0),
            comp: Complex64::new(0.0, 0.0),
        }
    }

    pub fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

impl Default for KahanComplex {
    fn default() -> Self {
        Self::new()
    }
}

/// Compensated summation; weight totals feed normalization so they are
/// accumulated in fixed order at extended effective precision.
pub fn kahan_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}
