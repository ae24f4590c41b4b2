//! Commutator studies of Toeplitz pairs: exact-rule pipelines share one
//! basis per truncation; stochastic rules run the jackknife pipeline with
//! its verdict bands. Trend sections track norms across cutoffs.

use super::{build_rule, rule_tag, CliError};
use crate::config::{CommutatorConfig, ExpectToml, ProfileToml, RuleToml, SymbolToml};
use crate::report::{Json, ReportBuilder, ReportDocument};
use bergman_core::group::invariance_spot_check;
use bergman_core::symbols::SymbolSpec;
use bergman_core::toeplitz::{
    commutator_norm, commutator_study, toeplitz_matrix, Verdict, NONZERO_SE_MULTIPLE,
    ZERO_SE_MULTIPLE,
};
use bergman_core::BasisHandle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Pair {
    label: String,
    left: SymbolToml,
    right: SymbolToml,
    expect: ExpectToml,
}

/// Even-power polynomial profiles stay polynomial in the coordinates, so
/// the radial-angular rule integrates them exactly.
fn random_even_profile(rng: &mut ChaCha8Rng) -> ProfileToml {
    let mut coeffs = vec![0.0; 5];
    for k in 0..=2 {
        coeffs[2 * k] = rng.gen_range(-1.0..1.0);
    }
    ProfileToml::Poly { coeffs }
}

fn assemble_pairs(c: &CommutatorConfig) -> Vec<Pair> {
    let mut pairs: Vec<Pair> = c
        .pairs
        .iter()
        .enumerate()
        .map(|(i, p)| Pair {
            label: p.label.clone().unwrap_or_else(|| format!("pair {i}")),
            left: p.left.clone(),
            right: p.right.clone(),
            expect: p.expect,
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x5eed_ab1e);
    for i in 0..c.random_radial_pairs {
        pairs.push(Pair {
            label: format!("random radial pair {i}"),
            left: SymbolToml::Radial {
                profile: random_even_profile(&mut rng),
            },
            right: SymbolToml::Radial {
                profile: random_even_profile(&mut rng),
            },
            expect: ExpectToml::Commuting,
        });
    }
    pairs
}

struct Measurement {
    spectral: f64,
    se: Option<f64>,
    verdict: Verdict,
    ess: Option<f64>,
}

pub fn run(c: &CommutatorConfig) -> Result<ReportDocument, CliError> {
    let domain = c.domain.to_domain()?;
    let lambdas = c.lambda.values();
    let pairs = assemble_pairs(c);
    let mut cutoffs = c.cutoff_trend.clone();
    if !cutoffs.contains(&c.cutoff) {
        cutoffs.push(c.cutoff);
    }
    cutoffs.sort_unstable();
    cutoffs.dedup();

    let symbol_budget = pairs
        .iter()
        .flat_map(|p| [p.left.exact_degree(), p.right.exact_degree()])
        .max()
        .unwrap_or(4);

    let inputs = Json::obj(vec![
        ("domain", Json::Str(format!("{:?}", domain.kind))),
        (
            "lambda",
            Json::Arr(lambdas.iter().map(|&l| Json::Float(l)).collect()),
        ),
        ("cutoff", Json::UInt(c.cutoff as u64)),
        (
            "cutoffs_evaluated",
            Json::Arr(cutoffs.iter().map(|&k| Json::UInt(k as u64)).collect()),
        ),
        ("rule", Json::Str(rule_tag(&c.rule))),
        ("seed", Json::UInt(c.seed)),
        ("pairs", Json::UInt(pairs.len() as u64)),
        ("commuting_tolerance", Json::Float(c.commuting_tolerance)),
        ("noncommuting_floor", Json::Float(c.noncommuting_floor)),
    ]);
    let mut report = ReportBuilder::new("commutator", c.title.clone(), inputs);

    for &lambda in &lambdas {
        // Stochastic rules are cutoff-independent: sample once per lambda.
        let mc_rule = match &c.rule {
            RuleToml::MonteCarlo { .. } => Some(build_rule(
                &c.rule,
                &domain,
                lambda,
                c.cutoff,
                symbol_budget,
                c.seed,
            )?),
            RuleToml::Exact => None,
        };

        // trend[pair] collects (cutoff, measurement) rows.
        let mut trend: Vec<Vec<(u32, Measurement)>> = pairs.iter().map(|_| Vec::new()).collect();

        for &cutoff in &cutoffs {
            let local;
            let rule = match &mc_rule {
                Some(r) => r,
                None => {
                    local = build_rule(&c.rule, &domain, lambda, cutoff, symbol_budget, c.seed)?;
                    &local
                }
            };

            // Exact path: one basis serves every pair at this truncation.
            let shared_basis = match &c.rule {
                RuleToml::Exact => Some(BasisHandle::build(&domain, lambda, cutoff, rule)?),
                RuleToml::MonteCarlo { .. } => None,
            };

            for (pi, pair) in pairs.iter().enumerate() {
                let a = pair.left.to_symbol(&domain)?;
                let b = pair.right.to_symbol(&domain)?;
                let m = match &shared_basis {
                    Some(basis) => {
                        let ta = toeplitz_matrix(basis, &a, rule)?;
                        let tb = toeplitz_matrix(basis, &b, rule)?;
                        let norms = commutator_norm(&ta, &tb)?;
                        let verdict = if norms.spectral < c.commuting_tolerance {
                            Verdict::Commuting
                        } else if norms.spectral > c.noncommuting_floor {
                            Verdict::Noncommuting
                        } else {
                            Verdict::Inconclusive
                        };
                        Measurement {
                            spectral: norms.spectral,
                            se: None,
                            verdict,
                            ess: None,
                        }
                    }
                    None => {
                        let study = commutator_study(
                            &domain,
                            lambda,
                            cutoff,
                            rule,
                            &a,
                            &b,
                            c.commuting_tolerance,
                        )?;
                        Measurement {
                            spectral: study.norms.spectral,
                            se: study.se_frobenius,
                            verdict: study.verdict,
                            ess: Some(study.ess),
                        }
                    }
                };

                let mut extra = vec![(
                    "verdict".to_string(),
                    Json::Str(format!("{:?}", m.verdict)),
                )];
                if let Some(e) = m.ess {
                    extra.push(("ess".to_string(), Json::Float(e)));
                }
                report.quantity_with(
                    format!(
                        "commutator spectral norm [{}] lambda={lambda} cutoff={cutoff}",
                        pair.label
                    ),
                    m.spectral,
                    m.se,
                    extra,
                );

                if cutoff == c.cutoff {
                    match (pair.expect, m.se) {
                        (ExpectToml::Commuting, None) => {
                            report.verdict(
                                format!("[{}] commutes (lambda={lambda})", pair.label),
                                m.spectral,
                                "<",
                                c.commuting_tolerance,
                            );
                        }
                        (ExpectToml::Commuting, Some(se)) => {
                            report.verdict(
                                format!(
                                    "[{}] commutes within noise (lambda={lambda})",
                                    pair.label
                                ),
                                m.spectral,
                                "<",
                                ZERO_SE_MULTIPLE * se,
                            );
                        }
                        (ExpectToml::Noncommuting, None) => {
                            report.verdict(
                                format!("[{}] does not commute (lambda={lambda})", pair.label),
                                m.spectral,
                                ">",
                                c.noncommuting_floor,
                            );
                        }
                        (ExpectToml::Noncommuting, Some(se)) => {
                            report.verdict(
                                format!(
                                    "[{}] resolves as nonzero (lambda={lambda})",
                                    pair.label
                                ),
                                m.spectral,
                                ">",
                                NONZERO_SE_MULTIPLE * se,
                            );
                        }
                        (ExpectToml::Diagnostic, _) => {}
                    }
                }

                trend[pi].push((cutoff, m));
            }
        }

        if cutoffs.len() > 1 {
            for (pi, pair) in pairs.iter().enumerate() {
                let rows = &trend[pi];
                match pair.expect {
                    ExpectToml::Commuting => {
                        // Truncation must not manufacture growth for a
                        // commuting pair; the floor absorbs float dust.
                        let first = rows.first().map(|r| r.1.spectral).unwrap_or(0.0);
                        let last = rows.last().map(|r| r.1.spectral).unwrap_or(0.0);
                        report.verdict(
                            format!(
                                "[{}] trend non-growing (lambda={lambda})",
                                pair.label
                            ),
                            last,
                            "<=",
                            first.max(1e-12),
                        );
                    }
                    ExpectToml::Noncommuting => {
                        // The signal must stay above its significance
                        // threshold at every truncation.
                        let min_ratio = rows
                            .iter()
                            .map(|(_, m)| match m.se {
                                Some(se) => m.spectral / (NONZERO_SE_MULTIPLE * se),
                                None => m.spectral / c.noncommuting_floor,
                            })
                            .fold(f64::INFINITY, f64::min);
                        report.verdict(
                            format!(
                                "[{}] trend stays significant (lambda={lambda})",
                                pair.label
                            ),
                            min_ratio,
                            ">",
                            1.0,
                        );
                    }
                    ExpectToml::Diagnostic => {}
                }
            }
        }
    }

    if let Some(inv) = &c.invariance_check {
        let subgroup = inv.subgroup.to_subgroup(&domain);
        let mut symbols: Vec<(String, SymbolSpec)> = Vec::new();
        for pair in &pairs {
            symbols.push((format!("{} left", pair.label), pair.left.to_symbol(&domain)?));
            symbols.push((
                format!("{} right", pair.label),
                pair.right.to_symbol(&domain)?,
            ));
        }
        for (label, symbol) in &symbols {
            let defect =
                invariance_spot_check(symbol, &subgroup, inv.elements, inv.points, c.seed)?;
            report.verdict(
                format!("[{label}] invariant under sampled subgroup"),
                defect,
                "<",
                inv.tolerance,
            );
        }
    }

    Ok(report.finish(None))
}
