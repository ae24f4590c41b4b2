//! Product trapezoid grid on a torus, the normalized Haar measure of the
//! diagonal-rotation subgroups.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{QuadratureRule, RuleKind};
use crate::domains::DomainPoint;
use crate::Result;

/// Equispaced product grid on T^d with `points_per_circle` points per
/// coordinate and uniform weights. Nodes store the unimodular values
/// e^(i theta_j) as a d x 1 matrix.
///
/// Exact for trigonometric polynomials of per-coordinate degree below
/// `points_per_circle`; degree-L terms alias to the constant term.
pub fn torus_rule(torus_dim: usize, points_per_circle: usize) -> Result<QuadratureRule> {
    let l = points_per_circle.max(1);
    let total = l.pow(torus_dim as u32);
    let mut nodes = Vec::with_capacity(total);
    let mut digits = vec![0usize; torus_dim];
    for idx in 0..total {
        let mut rest = idx;
        for d in digits.iter_mut().rev() {
            *d = rest % l;
            rest /= l;
        }
        let z = DMatrix::<Complex64>::from_fn(torus_dim, 1, |r, _| {
            let theta = 2.0 * std::f64::consts::PI * digits[r] as f64 / l as f64;
            Complex64::new(theta.cos(), theta.sin())
        });
        nodes.push(DomainPoint::from_matrix(z));
    }
    QuadratureRule::from_raw(
        RuleKind::TorusGrid,
        nodes,
        vec![1.0; total],
        vec![0],
        Some((l - 1) as u32),
        None,
        None,
        None,
        1.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_averages_to_one() {
        let rule = torus_rule(2, 5).unwrap();
        assert_eq!(rule.len(), 25);
        let (v, _) = rule.integrate(|_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn low_frequencies_vanish_high_alias() {
        let rule = torus_rule(1, 8).unwrap();
        for freq in 1..8u32 {
            let (v, _) = rule.integrate(|p| p.value[(0, 0)].powu(freq)).unwrap();
            assert!(v.norm() < 1e-14, "freq {freq} gave {v}");
        }
        // Frequency equal to the grid size aliases to the constant.
        let (aliased, _) = rule.integrate(|p| p.value[(0, 0)].powu(8)).unwrap();
        assert!((aliased.re - 1.0).abs() < 1e-13);
        assert!(aliased.im.abs() < 1e-13);
    }

    #[test]
    fn product_grid_separates_coordinates() {
        let rule = torus_rule(2, 4).unwrap();
        // e^{i(theta_1 - theta_2)} has per-coordinate degree 1 < 4.
        let (v, _) = rule
            .integrate(|p| p.value[(0, 0)] * p.value[(1, 0)].conj())
            .unwrap();
        assert!(v.norm() < 1e-14);
        // Matched frequencies survive: |e^{i theta_1}|^2 = 1.
        let (w, _) = rule
            .integrate(|p| p.value[(0, 0)] * p.value[(0, 0)].conj())
            .unwrap();
        assert!((w.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_dimensional_torus_is_a_point() {
        let rule = torus_rule(0, 3).unwrap();
        assert_eq!(rule.len(), 1);
        let (v, _) = rule.integrate(|_| Complex64::new(2.5, 0.0)).unwrap();
        assert!((v.re - 2.5).abs() < 1e-15);
    }
}
