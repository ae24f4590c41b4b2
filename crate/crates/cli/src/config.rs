//! TOML experiment configs: one strict schema per experiment, two-stage
//! parsed so unknown fields fail loudly, with conversions into core types.

use bergman_core::domains::{DomainDescriptor, DomainPoint};
use bergman_core::symbols::{CrossFactor, InvarianceClass, Profile, SymbolKind, SymbolSpec, TorusTerm};
use bergman_core::SubgroupDescriptor;
use num_complex::Complex64;
use serde::Deserialize;
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

// ---------------------------------------------------------------- shared

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DomainToml {
    pub kind: DomainKindToml,
    pub n: usize,
    #[serde(default)]
    pub m: usize,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKindToml {
    UnitBall,
    MatrixBall,
}

impl DomainToml {
    pub fn to_domain(&self) -> Result<DomainDescriptor, ConfigError> {
        match self.kind {
            DomainKindToml::UnitBall => {
                if self.m > 1 {
                    return Err(err("unit-ball takes no m parameter"));
                }
                DomainDescriptor::unit_ball(self.n).map_err(|e| err(e.to_string()))
            }
            DomainKindToml::MatrixBall => {
                if self.m == 0 {
                    return Err(err("matrix-ball needs m >= 1"));
                }
                DomainDescriptor::matrix_ball(self.n, self.m).map_err(|e| err(e.to_string()))
            }
        }
    }
}

/// One weight or a sweep; TOML accepts `lambda = 2.5` or `lambda = [2.5, 4.0]`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    One(f64),
    Many(Vec<f64>),
}

impl LambdaSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            LambdaSpec::One(v) => vec![*v],
            LambdaSpec::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
pub enum RuleToml {
    /// Deterministic radial-angular grid; rank-one domains only.
    Exact,
    MonteCarlo {
        count: usize,
    },
}

impl Default for RuleToml {
    fn default() -> Self {
        RuleToml::Exact
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
pub enum ProfileToml {
    Poly { coeffs: Vec<f64> },
    Cos { freq: f64 },
    Sin { freq: f64 },
    Exp { scale: f64 },
    Atan,
}

impl ProfileToml {
    pub fn to_profile(&self) -> Profile {
        match self {
            ProfileToml::Poly { coeffs } => Profile::Poly { coeffs: coeffs.clone() },
            ProfileToml::Cos { freq } => Profile::Cos { freq: *freq },
            ProfileToml::Sin { freq } => Profile::Sin { freq: *freq },
            ProfileToml::Exp { scale } => Profile::Exp { scale: *scale },
            ProfileToml::Atan => Profile::Atan,
        }
    }

    /// Polynomial degree in the invariant coordinate, for exact-rule sizing.
    pub fn poly_degree(&self) -> Option<u32> {
        match self {
            ProfileToml::Poly { coeffs } => Some(coeffs.len().saturating_sub(1) as u32),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossToml {
    One,
    Re,
    Im,
}

fn cross_one() -> CrossToml {
    CrossToml::One
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermToml {
    pub coeff: f64,
    pub powers: Vec<u32>,
    #[serde(default = "cross_one")]
    pub cross: CrossToml,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "family")]
pub enum SymbolToml {
    Radial { profile: ProfileToml },
    KInvariant { weights: [f64; 2], profile: ProfileToml },
    TorusModuli { terms: Vec<TermToml> },
    HyperbolicArc { profile: ProfileToml },
    Horocycle { profile: ProfileToml },
    RealForm { profile: ProfileToml },
    ReCoordinate { row: usize, col: usize },
    Sum { parts: Vec<SymbolToml> },
}

impl SymbolToml {
    pub fn to_symbol(&self, domain: &DomainDescriptor) -> Result<SymbolSpec, ConfigError> {
        let kind = match self {
            SymbolToml::Radial { profile } => SymbolKind::Radial {
                profile: profile.to_profile(),
            },
            SymbolToml::KInvariant { weights, profile } => SymbolKind::KInvariant {
                weights: (weights[0], weights[1]),
                profile: profile.to_profile(),
            },
            SymbolToml::TorusModuli { terms } => SymbolKind::TorusInvariant {
                terms: terms
                    .iter()
                    .map(|t| TorusTerm {
                        coeff: t.coeff,
                        powers: t.powers.clone(),
                        cross: match t.cross {
                            CrossToml::One => CrossFactor::One,
                            CrossToml::Re => CrossFactor::Re,
                            CrossToml::Im => CrossFactor::Im,
                        },
                    })
                    .collect(),
            },
            SymbolToml::HyperbolicArc { profile } => SymbolKind::HyperbolicArc {
                profile: profile.to_profile(),
            },
            SymbolToml::Horocycle { profile } => SymbolKind::Parabolic {
                profile: profile.to_profile(),
            },
            SymbolToml::RealForm { profile } => SymbolKind::RealFormInvariant {
                profile: profile.to_profile(),
            },
            SymbolToml::ReCoordinate { row, col } => {
                let (r, c) = (*row, *col);
                if r >= domain.rows() || c >= domain.cols() {
                    return Err(err(format!("coordinate ({r},{c}) outside the domain shape")));
                }
                return Ok(SymbolSpec::oracle(
                    domain,
                    Arc::new(move |p: &DomainPoint| Complex64::new(p.value[(r, c)].re, 0.0)),
                    InvarianceClass::None,
                    format!("Re z[{r}{c}]"),
                    true,
                    1.0,
                ));
            }
            SymbolToml::Sum { parts } => {
                if parts.is_empty() {
                    return Err(err("sum symbol needs at least one part"));
                }
                let specs: Vec<SymbolSpec> = parts
                    .iter()
                    .map(|p| p.to_symbol(domain))
                    .collect::<Result<_, _>>()?;
                let bound: f64 = specs.iter().map(|s| s.esssup_bound).sum();
                let real = specs.iter().all(|s| s.is_real());
                let label = specs
                    .iter()
                    .map(|s| s.describe())
                    .collect::<Vec<_>>()
                    .join(" + ");
                let shared = Arc::new(specs);
                let inner = Arc::clone(&shared);
                return Ok(SymbolSpec::oracle(
                    domain,
                    Arc::new(move |p: &DomainPoint| {
                        inner
                            .iter()
                            .map(|s| s.eval(p).unwrap_or(Complex64::new(f64::NAN, 0.0)))
                            .sum()
                    }),
                    InvarianceClass::None,
                    label,
                    real,
                    bound,
                ));
            }
        };
        SymbolSpec::new(kind, domain).map_err(|e| err(e.to_string()))
    }

    /// Degree budget this symbol adds to an exact rule, if polynomial.
    pub fn exact_degree(&self) -> u32 {
        match self {
            SymbolToml::Radial { profile } => profile.poly_degree().map_or(8, |d| 2 * d),
            SymbolToml::KInvariant { profile, .. } => profile.poly_degree().map_or(8, |d| 4 * d),
            SymbolToml::TorusModuli { terms } => terms
                .iter()
                .map(|t| 2 * t.powers.iter().sum::<u32>() + 4)
                .max()
                .unwrap_or(0),
            SymbolToml::ReCoordinate { .. } => 1,
            SymbolToml::Sum { parts } => parts.iter().map(|p| p.exact_degree()).max().unwrap_or(0),
            // Non-polynomial invariant coordinates: Gauss convergence only.
            _ => 8,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupToml {
    Rotation,
    Hyperbolic,
    Parabolic,
    Torus,
    MaximalCompact,
    RealForm,
}

impl SubgroupToml {
    pub fn to_subgroup(&self, domain: &DomainDescriptor) -> SubgroupDescriptor {
        let (n, m) = (domain.rows(), domain.cols());
        match self {
            SubgroupToml::Rotation => SubgroupDescriptor::Rotation,
            SubgroupToml::Hyperbolic => SubgroupDescriptor::Hyperbolic,
            SubgroupToml::Parabolic => SubgroupDescriptor::ParabolicN,
            SubgroupToml::Torus => SubgroupDescriptor::Torus { n, m },
            SubgroupToml::MaximalCompact => SubgroupDescriptor::MaximalCompact { n, m },
            SubgroupToml::RealForm => SubgroupDescriptor::RealForm { n },
        }
    }
}

// ------------------------------------------------------- per experiment

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CensusConfig {
    #[allow(dead_code)]
    experiment: String,
    pub title: Option<String>,
    pub n: usize,
    pub m: usize,
    pub cutoff: u32,
    pub expect_max_multiplicity: Option<u32>,
    #[serde(default)]
    pub expect_q_shift_families: bool,
    pub degree_slice: Option<DegreeSliceToml>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DegreeSliceToml {
    pub degree: u32,
    pub expect_weights: usize,
    pub expect_collision_classes: usize,
    pub expect_max_multiplicity: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CommutantConfig {
    #[allow(dead_code)]
    experiment: String,
    pub title: Option<String>,
    pub n: usize,
    pub m: usize,
    pub cutoff: u32,
    pub expect_dimension: Option<usize>,
    pub expect_commutative: Option<bool>,
    /// Also run the disk circle action and require a diagonal commutant.
    #[serde(default)]
    pub disk_diagonal_check: bool,
    pub agreement_sweep: Option<SweepToml>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepToml {
    pub n_max: usize,
    pub m_max: usize,
    pub cutoff_max: u32,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectToml {
    Commuting,
    Noncommuting,
    /// Reported with full detail but never asserted.
    Diagnostic,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct PairToml {
    pub label: Option<String>,
    pub left: SymbolToml,
    pub right: SymbolToml,
    pub expect: ExpectToml,
}

fn default_commuting_tolerance() -> f64 {
    1e-8
}

fn default_noncommuting_floor() -> f64 {
    1e-3
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CommutatorConfig {
    #[allow(dead_code)]
    experiment: String,
    pub title: Option<String>,
    pub domain: DomainToml,
    pub lambda: LambdaSpec,
    pub cutoff: u32,
    #[serde(default)]
    pub cutoff_trend: Vec<u32>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rule: RuleToml,
    #[serde(default)]
    pub pairs: Vec<PairToml>,
    /// Extra seeded random radial polynomial pairs, expected commuting.
    #[serde(default)]
    pub random_radial_pairs: u32,
    #[serde(default = "default_commuting_tolerance")]
    pub commuting_tolerance: f64,
    #[serde(default = "default_noncommuting_floor")]
    pub noncommuting_floor: f64,
    pub invariance_check: Option<InvarianceToml>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct InvarianceToml {
    pub subgroup: SubgroupToml,
    pub elements: usize,
    pub points: usize,
    pub tolerance: f64,
}

fn default_intertwine_tolerance() -> f64 {
    1e-6
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct IntertwineConfig {
    #[allow(dead_code)]
    experiment: String,
    pub title: Option<String>,
    pub domain: DomainToml,
    pub lambda: f64,
    pub cutoff: u32,
    pub symbol: SymbolToml,
    /// Rotation parameter of the tested group element.
    pub angle: f64,
    #[serde(default = "default_intertwine_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub rule: RuleToml,
    #[serde(default)]
    pub seed: u64,
}

fn default_average_tolerance() -> f64 {
    1e-8
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct AverageConfig {
    #[allow(dead_code)]
    experiment: String,
    pub title: Option<String>,
    pub domain: DomainToml,
    pub lambda: f64,
    pub cutoff: u32,
    pub subgroup: SubgroupToml,
    pub resolution: usize,
    pub symbol: SymbolToml,
    /// The operator average must reproduce this symbol's Toeplitz matrix.
    pub target: SymbolToml,
    #[serde(default = "default_average_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub rule: RuleToml,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ProjectionToml {
    pub polynomials: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct KernelToml {
    pub pairs: usize,
    /// Per-coordinate sampling radius for the random point pairs.
    pub radius: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct KernelCheckConfig {
    #[allow(dead_code)]
    experiment: String,
    pub title: Option<String>,
    pub domain: DomainToml,
    pub lambda: LambdaSpec,
    pub cutoff: u32,
    #[serde(default)]
    pub seed: u64,
    pub projection: Option<ProjectionToml>,
    pub kernel: Option<KernelToml>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct EigenLawToml {
    pub k_max: u32,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct NormsConfig {
    #[allow(dead_code)]
    experiment: String,
    pub title: Option<String>,
    pub domain: DomainToml,
    pub lambda: LambdaSpec,
    pub cutoff: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rule: RuleToml,
    /// Diagonal law of the squared-radius Toeplitz matrix on the disk.
    pub eigenvalue_law: Option<EigenLawToml>,
    /// Closed-form Gram identities on the 2x2 matrix ball.
    #[serde(default)]
    pub closed_form_checks: bool,
}

// ------------------------------------------------------------- top level

#[derive(Debug)]
pub enum ExperimentConfig {
    Census(CensusConfig),
    Commutant(CommutantConfig),
    Commutator(CommutatorConfig),
    Intertwine(IntertwineConfig),
    Average(AverageConfig),
    KernelCheck(KernelCheckConfig),
    Norms(NormsConfig),
}

#[derive(Deserialize)]
struct Probe {
    experiment: String,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let probe: Probe =
            toml::from_str(text).map_err(|e| err(format!("cannot read experiment field: {e}")))?;
        let parsed = match probe.experiment.as_str() {
            "census" => ExperimentConfig::Census(parse_as(text)?),
            "commutant" => ExperimentConfig::Commutant(parse_as(text)?),
            "commutator" => ExperimentConfig::Commutator(parse_as(text)?),
            "intertwine" => ExperimentConfig::Intertwine(parse_as(text)?),
            "average" => ExperimentConfig::Average(parse_as(text)?),
            "kernel-check" => ExperimentConfig::KernelCheck(parse_as(text)?),
            "norms" => ExperimentConfig::Norms(parse_as(text)?),
            other => return Err(err(format!("unknown experiment kind '{other}'"))),
        };
        parsed.validate()?;
        Ok(parsed)
    }

    /// Command-line overrides; seed applies to every seeded experiment,
    /// cutoff to every truncated one.
    pub fn apply_overrides(&mut self, seed: Option<u64>, cutoff: Option<u32>) {
        match self {
            ExperimentConfig::Census(c) => {
                if let Some(k) = cutoff {
                    c.cutoff = k;
                }
            }
            ExperimentConfig::Commutant(c) => {
                if let Some(k) = cutoff {
                    c.cutoff = k;
                }
            }
            ExperimentConfig::Commutator(c) => {
                if let Some(s) = seed {
                    c.seed = s;
                }
                if let Some(k) = cutoff {
                    c.cutoff = k;
                    c.cutoff_trend.clear();
                }
            }
            ExperimentConfig::Intertwine(c) => {
                if let Some(s) = seed {
                    c.seed = s;
                }
                if let Some(k) = cutoff {
                    c.cutoff = k;
                }
            }
            ExperimentConfig::Average(c) => {
                if let Some(s) = seed {
                    c.seed = s;
                }
                if let Some(k) = cutoff {
                    c.cutoff = k;
                }
            }
            ExperimentConfig::KernelCheck(c) => {
                if let Some(s) = seed {
                    c.seed = s;
                }
                if let Some(k) = cutoff {
                    c.cutoff = k;
                }
            }
            ExperimentConfig::Norms(c) => {
                if let Some(s) = seed {
                    c.seed = s;
                }
                if let Some(k) = cutoff {
                    c.cutoff = k;
                }
            }
        }
    }

    /// Structural validation before any computation; failure is exit 2.
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            ExperimentConfig::Census(c) => {
                if c.n == 0 || c.m == 0 {
                    return Err(err("census needs n, m >= 1"));
                }
                if c.expect_q_shift_families && (c.n != 2 || c.m != 2) {
                    return Err(err("q-shift families are a 2x2 statement"));
                }
                Ok(())
            }
            ExperimentConfig::Commutant(c) => {
                if c.n == 0 || c.m == 0 {
                    return Err(err("commutant needs n, m >= 1"));
                }
                Ok(())
            }
            ExperimentConfig::Commutator(c) => {
                let domain = c.domain.to_domain()?;
                check_lambdas(&domain, &c.lambda.values())?;
                check_rule(&domain, &c.rule)?;
                if c.pairs.is_empty() && c.random_radial_pairs == 0 {
                    return Err(err("commutator experiment has no symbol pairs"));
                }
                Ok(())
            }
            ExperimentConfig::Intertwine(c) => {
                let domain = c.domain.to_domain()?;
                check_lambdas(&domain, &[c.lambda])?;
                check_rule(&domain, &c.rule)
            }
            ExperimentConfig::Average(c) => {
                let domain = c.domain.to_domain()?;
                check_lambdas(&domain, &[c.lambda])?;
                check_rule(&domain, &c.rule)?;
                if c.resolution == 0 {
                    return Err(err("average needs resolution >= 1"));
                }
                Ok(())
            }
            ExperimentConfig::KernelCheck(c) => {
                let domain = c.domain.to_domain()?;
                check_lambdas(&domain, &c.lambda.values())?;
                if domain.rank != 1 {
                    return Err(err("kernel-check uses exact rules: rank-one domains only"));
                }
                if c.projection.is_none() && c.kernel.is_none() {
                    return Err(err("kernel-check needs a projection or kernel section"));
                }
                if let Some(k) = &c.kernel {
                    if !(k.radius > 0.0 && k.radius < 1.0) {
                        return Err(err("kernel radius must sit inside (0, 1)"));
                    }
                }
                Ok(())
            }
            ExperimentConfig::Norms(c) => {
                let domain = c.domain.to_domain()?;
                check_lambdas(&domain, &c.lambda.values())?;
                check_rule(&domain, &c.rule)?;
                if c.eigenvalue_law.is_none() && !c.closed_form_checks {
                    return Err(err("norms experiment has nothing to check"));
                }
                if let Some(law) = &c.eigenvalue_law {
                    if domain.rank != 1 || domain.rows() != 1 {
                        return Err(err("eigenvalue law is a disk statement"));
                    }
                    if law.k_max >= c.cutoff {
                        return Err(err("eigenvalue law needs k_max < cutoff"));
                    }
                }
                if c.closed_form_checks && (domain.rows() != 2 || domain.cols() != 2) {
                    return Err(err("closed-form checks target the 2x2 matrix ball"));
                }
                Ok(())
            }
        }
    }
}

fn parse_as<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    toml::from_str(text).map_err(|e| err(format!("invalid config: {e}")))
}

/// The weight family needs lambda > genus - 1 on every domain.
fn check_lambdas(domain: &DomainDescriptor, lambdas: &[f64]) -> Result<(), ConfigError> {
    if lambdas.is_empty() {
        return Err(err("lambda list is empty"));
    }
    for &l in lambdas {
        domain
            .check_lambda(l)
            .map_err(|e| err(format!("{e} on {:?}", domain.kind)))?;
    }
    Ok(())
}

fn check_rule(domain: &DomainDescriptor, rule: &RuleToml) -> Result<(), ConfigError> {
    match rule {
        RuleToml::Exact if domain.rank != 1 => Err(err(
            "exact radial rules exist only on rank-one domains; use monte-carlo",
        )),
        RuleToml::MonteCarlo { count } if *count == 0 => Err(err("monte-carlo count must be > 0")),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_commutator_config() {
        let text = r#"
experiment = "commutator"
title = "radial pairs"
domain = { kind = "unit-ball", n = 1 }
lambda = [2.0, 3.5]
cutoff = 10
cutoff-trend = [6, 8, 10]
random-radial-pairs = 5
"#;
        let cfg = ExperimentConfig::parse(text).unwrap();
        match cfg {
            ExperimentConfig::Commutator(c) => {
                assert_eq!(c.lambda.values(), vec![2.0, 3.5]);
                assert_eq!(c.cutoff_trend, vec![6, 8, 10]);
                assert_eq!(c.random_radial_pairs, 5);
                assert!(matches!(c.rule, RuleToml::Exact));
            }
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"
experiment = "census"
n = 2
m = 2
cutoff = 4
surprise = true
"#;
        let e = ExperimentConfig::parse(text).unwrap_err();
        assert!(e.0.contains("surprise") || e.0.contains("unknown field"), "{e}");
    }

    #[test]
    fn low_lambda_is_invalid() {
        let text = r#"
experiment = "norms"
domain = { kind = "unit-ball", n = 1 }
lambda = 1.0
cutoff = 13
eigenvalue-law = { k-max = 12, tolerance = 1e-10 }
"#;
        let e = ExperimentConfig::parse(text).unwrap_err();
        assert!(e.0.contains("lambda"), "{e}");
    }

    #[test]
    fn exact_rule_on_matrix_ball_is_invalid() {
        let text = r#"
experiment = "commutator"
domain = { kind = "matrix-ball", n = 2, m = 2 }
lambda = 5.0
cutoff = 3

[[pairs]]
expect = "noncommuting"
left = { family = "torus-moduli", terms = [{ coeff = 1.0, powers = [1, 0, 0, 0] }] }
right = { family = "torus-moduli", terms = [{ coeff = 1.0, powers = [0, 1, 0, 0] }] }
"#;
        let e = ExperimentConfig::parse(text).unwrap_err();
        assert!(e.0.contains("rank-one"), "{e}");
    }

    #[test]
    fn symbols_convert_to_specs() {
        let d = DomainDescriptor::unit_ball(1).unwrap();
        let s = SymbolToml::Sum {
            parts: vec![
                SymbolToml::Radial {
                    profile: ProfileToml::Poly { coeffs: vec![0.0, 0.0, 1.0] },
                },
                SymbolToml::ReCoordinate { row: 0, col: 0 },
            ],
        };
        let spec = s.to_symbol(&d).unwrap();
        assert!(spec.is_real());
        let p = DomainPoint::from_vector(vec![Complex64::new(0.5, 0.0)]);
        // |z|^2 + Re z at z = 0.5 is 0.75.
        assert!((spec.eval(&p).unwrap().re - 0.75).abs() < 1e-15);
        assert!(spec.esssup_bound >= 2.0 - 1e-12);
    }
}
