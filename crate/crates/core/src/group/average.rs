//! Haar averaging over compact subgroups, on symbols and on operator
//! matrices. For the rotation circle and the torus a uniform grid gives the
//! exact Haar average as soon as it outruns the frequency content of the
//! truncation; the full maximal compact block is averaged by sampling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

use crate::basis::BasisHandle;
use crate::domains::DomainPoint;
use crate::error::CoreError;
use crate::group::elements::{mobius_apply, GroupElement};
use crate::group::pi::pi_lambda_matrix;
use crate::group::subgroups::SubgroupDescriptor;
use crate::symbols::{InvarianceClass, SymbolSpec};
use crate::toeplitz::{Exactness, OperatorMatrix, Provenance};
use crate::Result;

/// Grid resolution that annihilates every cross-frequency a truncation at
/// this cutoff can carry, with margin.
pub fn default_average_resolution(cutoff: u32) -> usize {
    2 * cutoff as usize + 3
}

fn averaging_set(
    subgroup: &SubgroupDescriptor,
    resolution: usize,
    seed: u64,
) -> Result<Vec<(GroupElement, f64)>> {
    match subgroup {
        SubgroupDescriptor::Rotation | SubgroupDescriptor::Torus { .. } => {
            subgroup.grid(resolution)
        }
        SubgroupDescriptor::MaximalCompact { .. } => {
            let els = subgroup.sample(resolution, seed)?;
            let w = 1.0 / els.len() as f64;
            Ok(els.into_iter().map(|g| (g, w)).collect())
        }
        _ => Err(CoreError::NonCompactSubgroup),
    }
}

fn averaged_invariance(subgroup: &SubgroupDescriptor) -> InvarianceClass {
    match subgroup {
        SubgroupDescriptor::Rotation => InvarianceClass::Rotation,
        SubgroupDescriptor::Torus { .. } => InvarianceClass::Torus,
        SubgroupDescriptor::MaximalCompact { .. } => InvarianceClass::MaximalCompact,
        SubgroupDescriptor::Hyperbolic | SubgroupDescriptor::ParabolicN => {
            InvarianceClass::None
        }
        SubgroupDescriptor::RealForm { .. } => InvarianceClass::RealForm,
    }
}

/// phi_hat(z) = sum_h w_h phi(h^{-1} z) over the averaging set; the result
/// carries the subgroup's invariance class.
pub fn average_symbol(
    subgroup: &SubgroupDescriptor,
    symbol: &SymbolSpec,
    resolution: usize,
    seed: u64,
) -> Result<SymbolSpec> {
    if !subgroup.is_compact() {
        return Err(CoreError::NonCompactSubgroup);
    }
    subgroup.check_domain(&symbol.domain)?;
    let set = averaging_set(subgroup, resolution, seed)?;
    let inverses: Vec<(GroupElement, f64)> =
        set.into_iter().map(|(g, w)| (g.inverse(), w)).collect();
    let domain = symbol.domain;
    let inner = symbol.clone();
    let eval = Arc::new(move |p: &DomainPoint| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (h_inv, w) in &inverses {
            let moved = match mobius_apply(h_inv, &domain, p) {
                Ok(m) => m,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            match inner.eval(&moved) {
                Ok(v) => acc += v * Complex64::new(*w, 0.0),
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            }
        }
        acc
    });
    Ok(SymbolSpec::oracle(
        &domain,
        eval,
        averaged_invariance(subgroup),
        format!("haar_avg[{subgroup:?}, {}]", symbol.describe()),
        symbol.is_real(),
        symbol.esssup_bound,
    ))
}

/// T_hat = sum_h w_h pi(h) T pi(h)^{-1}. Compact elements have exact
/// degree-preserving matrices, so the only inexactness left is the one T
/// itself carries (plus sampling when the full block is averaged).
pub fn average_operator(
    basis: &BasisHandle,
    subgroup: &SubgroupDescriptor,
    t: &OperatorMatrix,
    resolution: usize,
    seed: u64,
) -> Result<OperatorMatrix> {
    if !subgroup.is_compact() {
        return Err(CoreError::NonCompactSubgroup);
    }
    subgroup.check_domain(&basis.domain)?;
    if t.basis_id != basis.basis_id {
        return Err(CoreError::BasisMismatch(
            t.basis_id.clone(),
            basis.basis_id.clone(),
        ));
    }
    let set = averaging_set(subgroup, resolution, seed)?;
    let dim = basis.dim();
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for (h, w) in &set {
        let pi_h = pi_lambda_matrix(basis, h, None, true)?;
        let pi_h_inv = pi_lambda_matrix(basis, &h.inverse(), None, true)?;
        acc += (&pi_h.entries * &t.entries * &pi_h_inv.entries) * Complex64::new(*w, 0.0);
    }
    let exactness = match subgroup {
        SubgroupDescriptor::MaximalCompact { .. } => Exactness::Observed,
        _ => t.meta.exactness,
    };
    Ok(OperatorMatrix {
        entries: acc,
        basis_id: t.basis_id.clone(),
        lambda: t.lambda,
        meta: Provenance {
            symbol: format!("haar_avg[{subgroup:?}, {}]", t.meta.symbol),
            rule: format!("conjugation_average[resolution={resolution}]"),
            seed: match subgroup {
                SubgroupDescriptor::MaximalCompact { .. } => Some(seed),
                _ => t.meta.seed,
            },
            exactness,
        },
        norm_bound_defect: t.norm_bound_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::DomainDescriptor;
    use crate::linalg::spectral_norm;
    use crate::quadrature::ball_radial_rule;
    use crate::symbols::{Profile, SymbolKind};
    use crate::toeplitz::toeplitz_matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rotation_average_of_re_z_vanishes() {
        let d = DomainDescriptor::unit_ball(1).unwrap();
        let re_z = SymbolSpec::oracle(
            &d,
            Arc::new(|p: &DomainPoint| Complex64::new(p.value[(0, 0)].re, 0.0)),
            InvarianceClass::None,
            "re_z",
            true,
            1.0,
        );
        let avg = average_symbol(&SubgroupDescriptor::Rotation, &re_z, 16, 0).unwrap();
        let z = DomainPoint::from_vector(vec![c(0.4, 0.2)]);
        assert!(avg.eval(&z).unwrap().norm() < 1e-15);
        assert_eq!(avg.invariance(), InvarianceClass::Rotation);
    }

    #[test]
    fn rotation_average_fixes_radial_symbols() {
        let d = DomainDescriptor::unit_ball(1).unwrap();
        let sym = SymbolSpec::new(
            SymbolKind::Radial {
                profile: Profile::Poly {
                    coeffs: vec![0.5, 0.0, 1.0],
                },
            },
            &d,
        )
        .unwrap();
        let avg = average_symbol(&SubgroupDescriptor::Rotation, &sym, 9, 0).unwrap();
        for z in [c(0.3, 0.1), c(-0.2, 0.6), c(0.0, 0.0)] {
            let p = DomainPoint::from_vector(vec![z]);
            let lhs = avg.eval(&p).unwrap();
            let rhs = sym.eval(&p).unwrap();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn lemma_identity_average_of_operator_equals_operator_of_average() {
        let d = DomainDescriptor::unit_ball(1).unwrap();
        let lambda = 2.0;
        let cutoff = 6u32;
        let rule = ball_radial_rule(1, lambda, 2 * cutoff + 2).unwrap();
        let basis = BasisHandle::build(&d, lambda, cutoff, &rule).unwrap();
        let sym = SymbolSpec::oracle(
            &d,
            Arc::new(|p: &DomainPoint| {
                let z = p.value[(0, 0)];
                Complex64::new(z.re + z.norm_sqr(), 0.0)
            }),
            InvarianceClass::None,
            "re_z_plus_r2",
            true,
            2.0,
        );
        let t = toeplitz_matrix(&basis, &sym, &rule).unwrap();
        let res = default_average_resolution(cutoff);
        let t_avg = average_operator(&basis, &SubgroupDescriptor::Rotation, &t, res, 0).unwrap();
        let sym_avg = average_symbol(&SubgroupDescriptor::Rotation, &sym, res, 0).unwrap();
        let t_of_avg = toeplitz_matrix(&basis, &sym_avg, &rule).unwrap();
        let defect = spectral_norm(&(&t_avg.entries - &t_of_avg.entries));
        assert!(defect < 1e-10, "lemma identity defect {defect}");
        // The averaged operator is diagonal: rotation invariance forces the
        // eigenvalue law.
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                if i != j {
                    assert!(t_avg.entries[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn torus_average_fixes_invariant_operators() {
        // A torus-invariant symbol is a fixed point of the averaging, on
        // both sides of the lemma identity, independent of sampling noise
        // in the underlying moments.
        let d = DomainDescriptor::matrix_ball(2, 2).unwrap();
        let lambda = 5.0;
        let rule = crate::quadrature::mc_sample(&d, lambda, 60_000, 7).unwrap();
        let basis = BasisHandle::build(&d, lambda, 1, &rule).unwrap();
        let sym = SymbolSpec::new(
            SymbolKind::TorusInvariant {
                terms: vec![crate::symbols::TorusTerm {
                    coeff: 1.0,
                    powers: vec![1, 0, 0, 0],
                    cross: crate::symbols::CrossFactor::One,
                }],
            },
            &d,
        )
        .unwrap();
        let torus = SubgroupDescriptor::Torus { n: 2, m: 2 };
        let t = toeplitz_matrix(&basis, &sym, &rule).unwrap();
        let t_avg = average_operator(&basis, &torus, &t, 5, 0).unwrap();
        assert!(
            spectral_norm(&(&t_avg.entries - &t.entries)) < 1e-12,
            "conjugation average must fix a weight-diagonal operator"
        );
        let sym_avg = average_symbol(&torus, &sym, 5, 0).unwrap();
        let t_of_avg = toeplitz_matrix(&basis, &sym_avg, &rule).unwrap();
        let defect = spectral_norm(&(&t_of_avg.entries - &t.entries));
        assert!(defect < 1e-10, "averaged invariant symbol drifted: {defect}");
    }

    #[test]
    fn non_compact_averaging_is_refused() {
        let d = DomainDescriptor::unit_ball(1).unwrap();
        let sym = SymbolSpec::new(
            SymbolKind::Radial {
                profile: Profile::Atan,
            },
            &d,
        )
        .unwrap();
        assert!(matches!(
            average_symbol(&SubgroupDescriptor::Hyperbolic, &sym, 8, 0),
            Err(CoreError::NonCompactSubgroup)
        ));
        assert!(matches!(
            average_symbol(&SubgroupDescriptor::RealForm { n: 1 }, &sym, 8, 0),
            Err(CoreError::NonCompactSubgroup)
        ));
    }
}
