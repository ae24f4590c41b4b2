//! Cross-module group action checks: measure invariance, the kernel
//! transformation law at fractional weight, and factorization geometry.

use bergman_core::domains::{DomainDescriptor, DomainPoint};
use bergman_core::group::{automorphy_power, average_symbol, pkp_factorize, GroupElement};
use bergman_core::quadrature::mc_sample;
use bergman_core::symbols::{InvarianceClass, SymbolSpec};
use bergman_core::{mobius_apply, SubgroupDescriptor};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// det(I - Z W^*)^(-lambda), principal branch; valid for points well
/// inside the domain where the determinant stays near 1.
fn kernel_closed_form(z: &DomainPoint, w: &DomainPoint, lambda: f64) -> Complex64 {
    let n = z.value.nrows();
    let mut h = DMatrix::<Complex64>::identity(n, n);
    h -= &z.value * w.value.adjoint();
    h.lu().determinant().powf(-lambda)
}

#[test]
fn torus_action_preserves_the_weighted_measure() {
    let d = DomainDescriptor::matrix_ball(2, 2).unwrap();
    let lambda = 5.0;
    let rule = mc_sample(&d, lambda, 250_000, 31).unwrap();
    let torus = SubgroupDescriptor::Torus { n: 2, m: 2 };
    let h = torus.element(&[0.83, -1.27, 0.41]).unwrap();
    // A symbol with no torus symmetry at all.
    let phi = |p: &DomainPoint| {
        let z11 = p.value[(0, 0)];
        let z22 = p.value[(1, 1)];
        Complex64::new(z11.re + z22.norm_sqr().powi(2), 0.0)
    };
    let (base, se_a) = rule.integrate(&phi).unwrap();
    let (moved, se_b) = rule
        .integrate(&|p: &DomainPoint| phi(&mobius_apply(&h, &d, p).unwrap()))
        .unwrap();
    let budget = 3.5 * (se_a.unwrap() + se_b.unwrap());
    assert!(
        (base - moved).norm() < budget,
        "invariance defect {:.2e} over budget {budget:.2e}",
        (base - moved).norm()
    );
}

#[test]
fn kernel_transformation_law_on_disk_at_fractional_weight() {
    let d = DomainDescriptor::unit_ball(1).unwrap();
    let lambda = 2.5;
    let hyp = SubgroupDescriptor::Hyperbolic.element(&[0.8]).unwrap();
    let par = SubgroupDescriptor::ParabolicN.element(&[0.6]).unwrap();
    for g in [&hyp, &par] {
        let pts = [c(0.3, 0.2), c(-0.5, 0.1), c(0.0, 0.0), c(0.2, -0.6)];
        let points: Vec<DomainPoint> = pts
            .iter()
            .map(|&z| DomainPoint::from_vector(vec![z]))
            .collect();
        let j = automorphy_power(g, &d, &points, lambda).unwrap();
        for a in 0..points.len() {
            for b in 0..points.len() {
                let gz = mobius_apply(g, &d, &points[a]).unwrap();
                let gw = mobius_apply(g, &d, &points[b]).unwrap();
                let lhs = kernel_closed_form(&gz, &gw, lambda) * j[a] * j[b].conj();
                let rhs = kernel_closed_form(&points[a], &points[b], lambda);
                assert!(
                    (lhs - rhs).norm() < 1e-12 * rhs.norm(),
                    "law fails at ({a},{b}): {lhs} vs {rhs}"
                );
            }
        }
    }
}

#[test]
fn kernel_transformation_law_on_matrix_ball() {
    let d = DomainDescriptor::matrix_ball(2, 2).unwrap();
    let lambda = 4.5;
    // A mixed compact/non-compact generator with an off-diagonal block.
    let mut x = DMatrix::<Complex64>::zeros(4, 4);
    x[(0, 2)] = c(0.4, 0.1);
    x[(2, 0)] = c(0.4, -0.1);
    x[(1, 3)] = c(-0.2, 0.3);
    x[(3, 1)] = c(-0.2, -0.3);
    x[(0, 0)] = c(0.0, 0.2);
    x[(1, 1)] = c(0.0, -0.2);
    let g = GroupElement::from_generator(&x, 0.7, 2, 2).unwrap();

    let mk = |e: [f64; 4]| {
        DomainPoint::from_matrix(DMatrix::from_row_slice(2, 2, &[
            c(e[0], 0.05),
            c(e[1], -0.1),
            c(e[2], 0.0),
            c(e[3], 0.08),
        ]))
    };
    let points = vec![mk([0.2, 0.1, -0.15, 0.25]), mk([0.0, 0.0, 0.0, 0.0]), mk([-0.3, 0.05, 0.1, -0.2])];
    let j = automorphy_power(&g, &d, &points, lambda).unwrap();
    for a in 0..points.len() {
        for b in 0..points.len() {
            let gz = mobius_apply(&g, &d, &points[a]).unwrap();
            let gw = mobius_apply(&g, &d, &points[b]).unwrap();
            let lhs = kernel_closed_form(&gz, &gw, lambda) * j[a] * j[b].conj();
            let rhs = kernel_closed_form(&points[a], &points[b], lambda);
            assert!(
                (lhs - rhs).norm() < 1e-11 * rhs.norm(),
                "law fails at ({a},{b}): {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn compact_elements_have_unimodular_factor_at_origin() {
    let d = DomainDescriptor::matrix_ball(2, 2).unwrap();
    let origin = DomainPoint::from_matrix(DMatrix::zeros(2, 2));
    let torus = SubgroupDescriptor::Torus { n: 2, m: 2 };
    let kmax = SubgroupDescriptor::MaximalCompact { n: 2, m: 2 };
    let mut elements = vec![torus.element(&[0.9, 0.2, -1.4]).unwrap()];
    elements.extend(kmax.sample(4, 77).unwrap());
    for h in &elements {
        let j = automorphy_power(h, &d, std::slice::from_ref(&origin), 3.25).unwrap();
        assert!(
            (j[0].norm() - 1.0).abs() < 1e-12,
            "|j(h, 0)| = {} for compact h",
            j[0].norm()
        );
    }
}

#[test]
fn factorization_upper_block_is_the_image_of_the_origin() {
    let hyp = SubgroupDescriptor::Hyperbolic.element(&[1.1]).unwrap();
    let d1 = DomainDescriptor::unit_ball(1).unwrap();
    let (p_plus, _, _) = pkp_factorize(&hyp).unwrap();
    let origin = DomainPoint::from_vector(vec![c(0.0, 0.0)]);
    let image = mobius_apply(&hyp, &d1, &origin).unwrap();
    assert!((p_plus[(0, 0)] - image.value[(0, 0)]).norm() < 1e-13);

    let d2 = DomainDescriptor::matrix_ball(2, 2).unwrap();
    for g in (SubgroupDescriptor::MaximalCompact { n: 2, m: 2 })
        .sample(2, 5)
        .unwrap()
    {
        // Compose with a fixed boost so D is generic and invertible.
        let mut x = DMatrix::<Complex64>::zeros(4, 4);
        x[(0, 2)] = c(0.5, 0.0);
        x[(2, 0)] = c(0.5, 0.0);
        let boost = GroupElement::from_generator(&x, 0.9, 2, 2).unwrap();
        let comp = g.compose(&boost).unwrap();
        let (p_plus, _, _) = pkp_factorize(&comp).unwrap();
        let origin = DomainPoint::from_matrix(DMatrix::zeros(2, 2));
        let image = mobius_apply(&comp, &d2, &origin).unwrap();
        assert!((&p_plus - &image.value).norm() < 1e-12);
    }
}

#[test]
fn grid_average_is_invariant_under_the_grid_generator() {
    let d = DomainDescriptor::unit_ball(1).unwrap();
    let phi = SymbolSpec::oracle(
        &d,
        Arc::new(|p: &DomainPoint| Complex64::new(p.value[(0, 0)].re + p.value[(0, 0)].im.powi(2), 0.0)),
        InvarianceClass::None,
        "re plus im squared",
        true,
        2.0,
    );
    let resolution = 13;
    let avg = average_symbol(&SubgroupDescriptor::Rotation, &phi, resolution, 0).unwrap();
    let step = SubgroupDescriptor::Rotation
        .element(&[std::f64::consts::TAU / resolution as f64])
        .unwrap();
    for z in [c(0.31, 0.4), c(-0.77, 0.11), c(0.05, -0.6)] {
        let p = DomainPoint::from_vector(vec![z]);
        let moved = mobius_apply(&step, &d, &p).unwrap();
        let a = phi.eval(&p).unwrap();
        let av = avg.eval(&p).unwrap();
        let av_m = avg.eval(&moved).unwrap();
        assert!((av - av_m).norm() < 1e-13, "grid invariance broken");
        // And the average genuinely changed the symbol.
        assert!((a - av).norm() > 1e-3 || a.norm() < 1e-12);
    }
}
