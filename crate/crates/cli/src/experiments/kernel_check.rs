//! Reproducing-kernel audits on rank-one domains: coefficient recovery of
//! random polynomials under the Bergman projection, and the truncated
//! kernel against its binomial closed form with an explicit tail bound.

use super::{build_rule, CliError};
use crate::config::{KernelCheckConfig, RuleToml};
use crate::report::{Json, ReportBuilder, ReportDocument};
use bergman_core::domains::DomainPoint;
use bergman_core::{bergman_project, kernel_eval, BasisHandle};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> DomainPoint {
    // Re/Im bounded by radius / sqrt(2n) keeps the Euclidean norm below
    // radius, so the pairing q = <z, w> obeys |q| <= radius^2 exactly.
    let s = radius / (2.0 * n as f64).sqrt();
    let m = DMatrix::from_fn(n, 1, |_, _| {
        Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s))
    });
    DomainPoint::from_matrix(m)
}

fn pairing(z: &DomainPoint, w: &DomainPoint) -> Complex64 {
    let mut q = Complex64::new(0.0, 0.0);
    for i in 0..z.value.nrows() {
        q += z.value[(i, 0)] * w.value[(i, 0)].conj();
    }
    q
}

/// Geometric bound on the dropped kernel tail past degree `cutoff`:
/// sum_{k>K} c_k |q|^k with c_{k+1} = c_k (lambda+k)/(k+1), whose term
/// ratio is decreasing, so the first dropped term dominates a geometric
/// series of ratio rho = |q| (lambda+K+1)/(K+2).
fn tail_bound(q_abs: f64, lambda: f64, cutoff: u32) -> f64 {
    let k = cutoff as f64;
    let mut c = 1.0;
    for j in 0..=cutoff {
        c *= (lambda + j as f64) / (j as f64 + 1.0);
    }
    let rho = q_abs * (lambda + k + 1.0) / (k + 2.0);
    debug_assert!(rho < 1.0);
    c * q_abs.powi(cutoff as i32 + 1) / (1.0 - rho)
}

pub fn run(c: &KernelCheckConfig) -> Result<ReportDocument, CliError> {
    let domain = c.domain.to_domain()?;
    let lambdas = c.lambda.values();

    let mut inputs = vec![
        ("domain", Json::Str(format!("{:?}", domain.kind))),
        (
            "lambda",
            Json::Arr(lambdas.iter().map(|&l| Json::Float(l)).collect()),
        ),
        ("cutoff", Json::UInt(c.cutoff as u64)),
        ("seed", Json::UInt(c.seed)),
    ];
    if let Some(p) = &c.projection {
        inputs.push(("projection polynomials", Json::UInt(p.polynomials as u64)));
        inputs.push(("projection tolerance", Json::Float(p.tolerance)));
    }
    if let Some(k) = &c.kernel {
        inputs.push(("kernel pairs", Json::UInt(k.pairs as u64)));
        inputs.push(("kernel radius", Json::Float(k.radius)));
    }
    let mut report = ReportBuilder::new("kernel-check", c.title.clone(), Json::obj(inputs));

    for &lambda in &lambdas {
        let rule = build_rule(&RuleToml::Exact, &domain, lambda, c.cutoff, 0, c.seed)?;
        let basis = BasisHandle::build(&domain, lambda, c.cutoff, &rule)?;
        report.quantity(
            format!("basis orthonormality defect lambda={lambda}"),
            basis.orthonormality_defect,
            None,
        );

        if let Some(p) = &c.projection {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            let mut worst = 0.0f64;
            for _ in 0..p.polynomials {
                let coeffs = DVector::from_fn(basis.dim(), |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                let f = |z: &DomainPoint| -> Complex64 {
                    basis
                        .eval_orthonormal(z)
                        .map(|e| e.dot(&coeffs))
                        .unwrap_or(Complex64::new(f64::NAN, 0.0))
                };
                let recovered = bergman_project(&basis, f, &rule)?;
                let err = (recovered - &coeffs)
                    .iter()
                    .map(|c| c.norm())
                    .fold(0.0, f64::max);
                worst = worst.max(err);
            }
            report.quantity(
                format!("max projection coefficient error lambda={lambda}"),
                worst,
                None,
            );
            report.verdict(
                format!("projection recovers polynomial coefficients (lambda={lambda})"),
                worst,
                "<",
                p.tolerance,
            );
        }

        if let Some(kc) = &c.kernel {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x6b65_726e);
            let n = domain.rows();
            let mut worst_excess = f64::NEG_INFINITY;
            let mut worst_diff = 0.0f64;
            let mut worst_bound = 0.0f64;
            let mut max_q = 0.0f64;
            for _ in 0..kc.pairs {
                let z = random_point(&mut rng, n, kc.radius);
                let w = random_point(&mut rng, n, kc.radius);
                let q = pairing(&z, &w);
                let truncated = kernel_eval(&basis, &z, &w)?;
                let closed = (Complex64::new(1.0, 0.0) - q).powf(-lambda);
                let diff = (truncated - closed).norm();
                let bound = tail_bound(q.norm(), lambda, c.cutoff);
                worst_excess = worst_excess.max(diff - bound);
                worst_diff = worst_diff.max(diff);
                worst_bound = worst_bound.max(bound);
                max_q = max_q.max(q.norm());
            }
            report.quantity(
                format!("max kernel deviation lambda={lambda}"),
                worst_diff,
                None,
            );
            report.quantity(
                format!("max tail bound lambda={lambda}"),
                worst_bound,
                None,
            );
            report.quantity(format!("max pairing modulus lambda={lambda}"), max_q, None);
            // Slack of 1e-9 absorbs roundoff in the closed form itself.
            report.verdict(
                format!("kernel matches closed form within tail bound (lambda={lambda})"),
                worst_excess,
                "<=",
                1e-9,
            );
        }
    }

    Ok(report.finish(None))
}
