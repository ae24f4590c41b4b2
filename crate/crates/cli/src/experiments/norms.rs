//! Norm and moment audits: the diagonal law of the squared-radius Toeplitz
//! matrix on the disk, and closed-form Gram moments on the 2x2 matrix ball
//! estimated by the shared stochastic rule.

use super::{build_rule, rule_tag, CliError};
use crate::config::NormsConfig;
use crate::report::{Json, ReportBuilder, ReportDocument};
use bergman_core::domains::DomainPoint;
use bergman_core::{toeplitz_matrix, BasisHandle, Profile, SymbolKind, SymbolSpec};
use num_complex::Complex64;

/// The four lowest nontrivial moments of the 2x2 matrix-ball measure with
/// their exact values; the mixed product moment is genuinely negative.
fn closed_form_targets(lambda: f64) -> [(&'static str, fn(&DomainPoint) -> Complex64, f64); 4] {
    fn sq_corner(p: &DomainPoint) -> Complex64 {
        let a = p.value[(0, 0)];
        Complex64::new(a.norm_sqr(), 0.0)
    }
    fn sq_diag_product(p: &DomainPoint) -> Complex64 {
        let ad = p.value[(0, 0)] * p.value[(1, 1)];
        Complex64::new(ad.norm_sqr(), 0.0)
    }
    fn cross(p: &DomainPoint) -> Complex64 {
        let bc = p.value[(0, 1)] * p.value[(1, 0)];
        let ad = p.value[(0, 0)] * p.value[(1, 1)];
        bc * ad.conj()
    }
    fn sq_det(p: &DomainPoint) -> Complex64 {
        let det = p.value[(0, 0)] * p.value[(1, 1)] - p.value[(0, 1)] * p.value[(1, 0)];
        Complex64::new(det.norm_sqr(), 0.0)
    }
    [
        ("corner norm squared", sq_corner, 1.0 / lambda),
        (
            "diagonal product norm squared",
            sq_diag_product,
            1.0 / (lambda * lambda - 1.0),
        ),
        (
            "antidiagonal cross moment",
            cross,
            -1.0 / (lambda * (lambda * lambda - 1.0)),
        ),
        (
            "determinant norm squared",
            sq_det,
            2.0 / (lambda * (lambda - 1.0)),
        ),
    ]
}

pub fn run(c: &NormsConfig) -> Result<ReportDocument, CliError> {
    let domain = c.domain.to_domain()?;
    let lambdas = c.lambda.values();

    let inputs = Json::obj(vec![
        ("domain", Json::Str(format!("{:?}", domain.kind))),
        (
            "lambda",
            Json::Arr(lambdas.iter().map(|&l| Json::Float(l)).collect()),
        ),
        ("cutoff", Json::UInt(c.cutoff as u64)),
        ("rule", Json::Str(rule_tag(&c.rule))),
        ("seed", Json::UInt(c.seed)),
    ]);
    let mut report = ReportBuilder::new("norms", c.title.clone(), inputs);

    for &lambda in &lambdas {
        if let Some(law) = &c.eigenvalue_law {
            // The squared-radius profile takes the operator norm r as its
            // argument, hence the r^2 polynomial.
            let symbol = SymbolSpec::new(
                SymbolKind::Radial {
                    profile: Profile::Poly {
                        coeffs: vec![0.0, 0.0, 1.0],
                    },
                },
                &domain,
            )?;
            let rule = build_rule(&c.rule, &domain, lambda, c.cutoff, 2, c.seed)?;
            let basis = BasisHandle::build(&domain, lambda, c.cutoff, &rule)?;
            let t = toeplitz_matrix(&basis, &symbol, &rule)?;

            let mut worst_diag = 0.0f64;
            for i in 0..basis.dim() {
                let k = basis.index_list[i].degree();
                if k > law.k_max {
                    continue;
                }
                let expected = (k as f64 + 1.0) / (k as f64 + lambda);
                worst_diag = worst_diag.max((t.entries[(i, i)].re - expected).abs());
            }
            let mut worst_off = 0.0f64;
            for i in 0..basis.dim() {
                for j in 0..basis.dim() {
                    if i != j {
                        worst_off = worst_off.max(t.entries[(i, j)].norm());
                    }
                }
            }
            report.quantity(
                format!("max diagonal law deviation lambda={lambda}"),
                worst_diag,
                None,
            );
            report.quantity(
                format!("max off-diagonal magnitude lambda={lambda}"),
                worst_off,
                None,
            );
            report.verdict(
                format!(
                    "squared-radius diagonal follows (k+1)/(k+lambda) (lambda={lambda})"
                ),
                worst_diag,
                "<",
                law.tolerance,
            );
            report.verdict(
                format!("squared-radius operator is diagonal (lambda={lambda})"),
                worst_off,
                "<",
                law.tolerance,
            );
        }

        if c.closed_form_checks {
            let rule = build_rule(&c.rule, &domain, lambda, c.cutoff, 4, c.seed)?;
            report.quantity(
                format!("rule acceptance rate lambda={lambda}"),
                rule.acceptance_rate,
                None,
            );
            report.quantity(format!("rule ess lambda={lambda}"), rule.ess, None);
            for (name, integrand, exact) in closed_form_targets(lambda) {
                let (value, se) = rule.integrate(&|p: &DomainPoint| integrand(p))?;
                let se = se.unwrap_or(0.0);
                report.quantity_with(
                    format!("{name} lambda={lambda}"),
                    value.re,
                    Some(se),
                    vec![("exact".to_string(), Json::Float(exact))],
                );
                report.verdict(
                    format!("{name} matches closed form within 4 SE (lambda={lambda})"),
                    (value.re - exact).abs(),
                    "<",
                    4.0 * se,
                );
                if name == "antidiagonal cross moment" {
                    report.verdict(
                        format!("cross moment resolves negative (lambda={lambda})"),
                        value.re,
                        "<",
                        -3.0 * se,
                    );
                }
            }
        }
    }

    Ok(report.finish(None))
}
