//! Experiment dispatch: each config variant runs its pipeline and emits a
//! report document whose verdicts drive the process exit code.

mod average;
mod census;
mod commutant;
mod commutator;
mod intertwine;
mod kernel_check;
mod norms;

use crate::config::{ConfigError, ExperimentConfig, RuleToml};
use crate::report::ReportDocument;
use bergman_core::domains::DomainDescriptor;
use bergman_core::quadrature::{ball_radial_rule, mc_sample, QuadratureRule};
use bergman_core::CoreError;
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Core(CoreError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    /// Stable machine-readable failure code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "invalid-config",
            CliError::Core(e) => core_error_code(e),
        }
    }
}

pub fn core_error_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::InvalidDomain(_) => "invalid-domain",
        CoreError::ShapeMismatch(_) => "shape-mismatch",
        CoreError::OutsideDomain => "outside-domain",
        CoreError::LambdaOutOfRange { .. } => "lambda-out-of-range",
        CoreError::Quadrature(_) => "quadrature",
        CoreError::LowAcceptance { .. } => "low-acceptance",
        CoreError::NonFiniteIntegrand { .. } => "non-finite-integrand",
        CoreError::IllConditioned { .. } => "ill-conditioned",
        CoreError::NotPositiveDefinite => "not-positive-definite",
        CoreError::BasisMismatch(_, _) => "basis-mismatch",
        CoreError::DimensionMismatch(_) => "dimension-mismatch",
        CoreError::MembershipViolation { .. } => "membership-violation",
        CoreError::SingularMatrix => "singular-matrix",
        CoreError::PathRequired => "path-required",
        CoreError::PhaseTracking(_) => "phase-tracking",
        CoreError::NonCompactSubgroup => "non-compact-subgroup",
        CoreError::NonCompactExactness => "non-compact-exactness",
        CoreError::EmptyInput(_) => "empty-input",
        CoreError::Persist(_) => "persist",
        CoreError::Io(_) => "io",
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

pub fn run(config: &ExperimentConfig) -> Result<ReportDocument, CliError> {
    match config {
        ExperimentConfig::Census(c) => census::run(c),
        ExperimentConfig::Commutant(c) => commutant::run(c),
        ExperimentConfig::Commutator(c) => commutator::run(c),
        ExperimentConfig::Intertwine(c) => intertwine::run(c),
        ExperimentConfig::Average(c) => average::run(c),
        ExperimentConfig::KernelCheck(c) => kernel_check::run(c),
        ExperimentConfig::Norms(c) => norms::run(c),
    }
}

/// Builds the integration rule for one (domain, lambda, cutoff) context.
/// Exact rules size the grid to cover Gram degree plus the symbol budget.
pub fn build_rule(
    rule: &RuleToml,
    domain: &DomainDescriptor,
    lambda: f64,
    cutoff: u32,
    symbol_degree: u32,
    seed: u64,
) -> Result<QuadratureRule, CliError> {
    match rule {
        RuleToml::Exact => {
            // The product rule is exact to total degree 2 * k_max; a Gram
            // at this cutoff needs k_max = cutoff and a polynomial symbol
            // of degree d adds d/2. Non-polynomial profiles reuse the same
            // margin as spectral-convergence headroom.
            let k_max = cutoff + symbol_degree.max(4);
            Ok(ball_radial_rule(domain.rows(), lambda, k_max)?)
        }
        RuleToml::MonteCarlo { count } => Ok(mc_sample(domain, lambda, *count, seed)?),
    }
}

/// Short rule tag for report inputs.
pub fn rule_tag(rule: &RuleToml) -> String {
    match rule {
        RuleToml::Exact => "exact".to_string(),
        RuleToml::MonteCarlo { count } => format!("monte-carlo[count={count}]"),
    }
}
