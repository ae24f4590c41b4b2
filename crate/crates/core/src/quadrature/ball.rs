//! Deterministic product rule on the unit ball of C^n against the weighted
//! measure, exact to rounding for polynomials in z and conj(z) up to a
//! requested total degree.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi::gauss_jacobi_unit;
use super::{QuadratureRule, RuleKind};
use crate::domains::{DomainDescriptor, DomainPoint};
use crate::error::CoreError;
use crate::Result;

/// Product rule on the unit ball of C^n for the measure with weight
/// (1 - |z|^2)^(lambda - n - 1): per-coordinate Gauss radial nodes from the
/// stick-breaking factorization of the simplex of squared moduli, times a
/// uniform angular grid per coordinate.
///
/// Exact (to rounding) for every polynomial in z, conj(z) of total degree
/// at most 2 * k_max. Requires lambda > n.
pub fn ball_radial_rule(n: usize, lambda: f64, k_max: u32) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(CoreError::InvalidDomain("ball rule needs n >= 1".into()));
    }
    let domain = DomainDescriptor::unit_ball(n)?;
    domain.check_lambda(lambda)?;

    // 2q - 1 >= k_max radial exactness; angular grid kills every monomial
    // with unbalanced exponents up to |a_j - b_j| <= 2 k_max.
    let q = (k_max / 2 + 1) as usize;
    let l = (2 * k_max + 1) as usize;

    // Squared moduli u_j = t_j * prod_{i<j} (1 - t_i) turn the simplex
    // integral into a product of one-dimensional Jacobi weights
    // (1 - t)^(lambda - 2 - j) dt.
    let mut radial = Vec::with_capacity(n);
    for j in 0..n {
        let b = lambda - 2.0 - j as f64;
        radial.push(gauss_jacobi_unit(q, 0.0, b)?);
    }
    let angles: Vec<f64> = (0..l)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / l as f64)
        .collect();

    let per_coord = q * l;
    let total = per_coord.pow(n as u32);
    let mut nodes = Vec::with_capacity(total);
    let mut raw_weights = Vec::with_capacity(total);
    let inv_l = 1.0 / l as f64;

    let mut digits = vec![0usize; n];
    for idx in 0..total {
        let mut rest = idx;
        for d in digits.iter_mut().rev() {
            *d = rest % per_coord;
            rest /= per_coord;
        }
        let mut z = DMatrix::<Complex64>::zeros(n, 1);
        let mut w = 1.0;
        let mut prefix = 1.0;
        for j in 0..n {
            let ti = digits[j] / l;
            let li = digits[j] % l;
            let t = radial[j].0[ti];
            let u = t * prefix;
            prefix *= 1.0 - t;
            let r = u.sqrt();
            let theta = angles[li];
            z[(j, 0)] = Complex64::new(r * theta.cos(), r * theta.sin());
            w *= radial[j].1[ti] * inv_l;
        }
        nodes.push(DomainPoint::from_matrix(z));
        raw_weights.push(w);
    }

    QuadratureRule::from_raw(
        RuleKind::RadialAngular,
        nodes,
        raw_weights,
        vec![0],
        Some(2 * k_max),
        None,
        Some(domain),
        Some(lambda),
        1.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::MultiIndex;

    /// Ball monomial norm by the Beta-product oracle:
    /// ||z^a||^2 = prod_j a_j! / poch(lambda, |a|), written as a stable
    /// product of ratios.
    fn norm_oracle(lambda: f64, alpha: &[u32]) -> f64 {
        let total: u32 = alpha.iter().sum();
        let mut v = 1.0;
        let mut step = 0u32;
        for &aj in alpha {
            for i in 1..=aj {
                v *= i as f64 / (lambda + step as f64);
                step += 1;
            }
        }
        debug_assert_eq!(step, total);
        v
    }

    #[test]
    fn rejects_lambda_at_or_below_n() {
        assert!(ball_radial_rule(1, 1.0, 4).is_err());
        assert!(ball_radial_rule(2, 2.0, 4).is_err());
        assert!(ball_radial_rule(2, 2.0001, 4).is_ok());
    }

    #[test]
    fn normalization_and_symmetry_on_disk() {
        let rule = ball_radial_rule(1, 2.0, 6).unwrap();
        let (one, _) = rule.integrate(|_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((one.re - 1.0).abs() < 1e-14);
        // Odd monomial killed exactly by the angular grid.
        let (z_mean, _) = rule.integrate(|p| p.value[(0, 0)]).unwrap();
        assert!(z_mean.norm() < 1e-16);
    }

    #[test]
    fn disk_moments_match_beta_oracle() {
        // lambda = 2: ||z^k||^2 = k!/(2)_k = 1/(k+1); lambda = 3: 2/((k+1)(k+2)).
        let rule = ball_radial_rule(1, 2.0, 8).unwrap();
        for k in 0..=8u32 {
            let (m, _) = rule
                .integrate(|p| Complex64::new(p.value[(0, 0)].norm_sqr().powi(k as i32), 0.0))
                .unwrap();
            let want = norm_oracle(2.0, &[k]);
            assert!(
                (m.re - want).abs() < 1e-12 * want.max(1.0),
                "k={k}: {} vs {want}",
                m.re
            );
        }
        let rule3 = ball_radial_rule(1, 3.0, 4).unwrap();
        let (m2, _) = rule3
            .integrate(|p| Complex64::new(p.value[(0, 0)].norm_sqr().powi(2), 0.0))
            .unwrap();
        assert!((m2.re - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn ball2_mixed_moments_match_oracle() {
        let rule = ball_radial_rule(2, 3.0, 5).unwrap();
        let (m10, _) = rule
            .integrate(|p| Complex64::new(p.value[(0, 0)].norm_sqr(), 0.0))
            .unwrap();
        assert!((m10.re - 1.0 / 3.0).abs() < 1e-13, "got {}", m10.re);
        for alpha in [[1u32, 1], [2, 1], [3, 2], [0, 5]] {
            let want = norm_oracle(3.0, &alpha);
            let (m, _) = rule
                .integrate(|p| {
                    let a = p.value[(0, 0)].norm_sqr().powi(alpha[0] as i32);
                    let b = p.value[(1, 0)].norm_sqr().powi(alpha[1] as i32);
                    Complex64::new(a * b, 0.0)
                })
                .unwrap();
            assert!(
                (m.re - want).abs() < 1e-12 * want.max(1e-6),
                "alpha={alpha:?}: {} vs {want}",
                m.re
            );
        }
    }

    #[test]
    fn cross_terms_vanish_exactly() {
        let rule = ball_radial_rule(2, 4.5, 4).unwrap();
        let idx = MultiIndex::new(2, 1, vec![2, 1]).unwrap();
        let jdx = MultiIndex::new(2, 1, vec![1, 2]).unwrap();
        let (cross, _) = rule
            .integrate(|p| p.monomial(&idx) * p.monomial(&jdx).conj())
            .unwrap();
        assert!(cross.norm() < 1e-16);
    }

    #[test]
    fn fractional_lambda_moments() {
        // lambda = 2.5 on the disk: ||z||^2 = 1/2.5, ||z^2||^2 = 2/(2.5*3.5).
        let rule = ball_radial_rule(1, 2.5, 4).unwrap();
        let (m1, _) = rule
            .integrate(|p| Complex64::new(p.value[(0, 0)].norm_sqr(), 0.0))
            .unwrap();
        assert!((m1.re - 0.4).abs() < 1e-14);
        let (m2, _) = rule
            .integrate(|p| Complex64::new(p.value[(0, 0)].norm_sqr().powi(2), 0.0))
            .unwrap();
        assert!((m2.re - 2.0 / 8.75).abs() < 1e-14);
    }

    #[test]
    fn nodes_stay_inside_the_ball() {
        let rule = ball_radial_rule(3, 4.0, 3).unwrap();
        let d = DomainDescriptor::unit_ball(3).unwrap();
        for node in &rule.nodes {
            assert!(d.contains(node).unwrap());
        }
        assert_eq!(rule.exactness_degree, Some(6));
        assert_eq!(rule.acceptance_rate, 1.0);
    }
}
