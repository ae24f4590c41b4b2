use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("point outside the open domain")]
    OutsideDomain,

    #[error("weight lambda = {lambda} out of range, needs lambda > {min}")]
    LambdaOutOfRange { lambda: f64, min: f64 },

    #[error("quadrature construction failed: {0}")]
    Quadrature(String),

    #[error("sampler acceptance rate {rate:.3e} fell below 1e-4")]
    LowAcceptance { rate: f64 },

    #[error("non-finite integrand value at node {index}")]
    NonFiniteIntegrand { index: usize },

    #[error("gram matrix condition number {cond:.3e} exceeds 1e12")]
    IllConditioned { cond: f64 },

    #[error("matrix is not positive definite within tolerance")]
    NotPositiveDefinite,

    #[error("operands live on different bases: {0} vs {1}")]
    BasisMismatch(String, String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix fails group membership, defect {defect:.3e}")]
    MembershipViolation { defect: f64 },

    #[error("matrix numerically singular")]
    SingularMatrix,

    #[error("group element carries no one-parameter path, fractional powers need one")]
    PathRequired,

    #[error("phase tracking failed: {0}")]
    PhaseTracking(String),

    #[error("operation requires a compact subgroup")]
    NonCompactSubgroup,

    #[error("truncated matrices of non-compact elements carry no exactness guarantee")]
    NonCompactExactness,

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("persistence: {0}")]
    Persist(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
