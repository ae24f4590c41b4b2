//! Named subgroups used for invariance checks and averaging: the rotation
//! circle and the hyperbolic / parabolic one-parameter groups on the disk,
//! the diagonal torus, the full maximal compact block, and the real form
//! SO0(n,1) inside SU(n,1).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::domains::DomainDescriptor;
use crate::error::CoreError;
use crate::group::elements::{GroupElement, PathData};
use crate::quadrature::haar_unitary_sample;
use crate::symbols::InvarianceClass;
use crate::Result;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subgroup", rename_all = "snake_case")]
pub enum SubgroupDescriptor {
    /// z -> e^{i theta} z on the disk.
    Rotation,
    /// cosh/sinh one-parameter group on the disk; fixes +-1.
    Hyperbolic,
    /// Unipotent group fixing z = 1 on the disk.
    ParabolicN,
    /// Diagonal phase torus of SU(n,m); n + m - 1 free angles.
    Torus { n: usize, m: usize },
    /// S(U(n) x U(m)) block subgroup.
    MaximalCompact { n: usize, m: usize },
    /// SO0(n,1) inside SU(n,1), acting on the ball with real coefficients.
    RealForm { n: usize },
}

impl SubgroupDescriptor {
    pub fn is_compact(&self) -> bool {
        matches!(
            self,
            SubgroupDescriptor::Rotation
                | SubgroupDescriptor::Torus { .. }
                | SubgroupDescriptor::MaximalCompact { .. }
        )
    }

    /// The (n, m) block signature of the ambient group.
    pub fn signature(&self) -> (usize, usize) {
        match self {
            SubgroupDescriptor::Rotation
            | SubgroupDescriptor::Hyperbolic
            | SubgroupDescriptor::ParabolicN => (1, 1),
            SubgroupDescriptor::Torus { n, m } | SubgroupDescriptor::MaximalCompact { n, m } => {
                (*n, *m)
            }
            SubgroupDescriptor::RealForm { n } => (*n, 1),
        }
    }

    /// The subgroup acting on a given domain whose orbits a declared
    /// invariance class is constant on, when one is catalogued.
    pub fn for_invariance(class: InvarianceClass, domain: &DomainDescriptor) -> Option<Self> {
        let (n, m) = (domain.rows(), domain.cols());
        match class {
            InvarianceClass::Rotation => (n == 1 && m == 1).then_some(SubgroupDescriptor::Rotation),
            InvarianceClass::Torus => Some(SubgroupDescriptor::Torus { n, m }),
            InvarianceClass::MaximalCompact => {
                Some(SubgroupDescriptor::MaximalCompact { n, m })
            }
            InvarianceClass::HyperbolicAxis => {
                (n == 1 && m == 1).then_some(SubgroupDescriptor::Hyperbolic)
            }
            InvarianceClass::ParabolicHorocycle => {
                (n == 1 && m == 1).then_some(SubgroupDescriptor::ParabolicN)
            }
            InvarianceClass::RealForm => (m == 1).then_some(SubgroupDescriptor::RealForm { n }),
            InvarianceClass::None => None,
        }
    }

    pub fn check_domain(&self, domain: &DomainDescriptor) -> Result<()> {
        let (n, m) = self.signature();
        if domain.rows() != n || domain.cols() != m {
            return Err(CoreError::ShapeMismatch(format!(
                "subgroup acts on {n}x{m} matrices, domain is {}x{}",
                domain.rows(),
                domain.cols()
            )));
        }
        Ok(())
    }

    /// One-parameter generator for the disk subgroups.
    fn disk_generator(&self) -> Option<DMatrix<Complex64>> {
        match self {
            SubgroupDescriptor::Rotation => Some(DMatrix::from_row_slice(
                2,
                2,
                &[c(0.0, 0.5), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -0.5)],
            )),
            SubgroupDescriptor::Hyperbolic => Some(DMatrix::from_row_slice(
                2,
                2,
                &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            )),
            SubgroupDescriptor::ParabolicN => Some(DMatrix::from_row_slice(
                2,
                2,
                &[c(0.0, 1.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, -1.0)],
            )),
            _ => None,
        }
    }

    /// The element at given parameters. Disk subgroups take one parameter;
    /// the torus takes its free angles (the last phase balances the
    /// determinant); the remaining families are sampled, not parametrized.
    pub fn element(&self, params: &[f64]) -> Result<GroupElement> {
        match self {
            SubgroupDescriptor::Rotation
            | SubgroupDescriptor::Hyperbolic
            | SubgroupDescriptor::ParabolicN => {
                if params.len() != 1 {
                    return Err(CoreError::DimensionMismatch(
                        "disk subgroup takes one parameter".into(),
                    ));
                }
                let x = self.disk_generator().unwrap();
                GroupElement::from_generator(&x, params[0], 1, 1)
            }
            SubgroupDescriptor::Torus { n, m } => {
                let free = n + m - 1;
                if params.len() != free {
                    return Err(CoreError::DimensionMismatch(format!(
                        "torus takes {free} free angles"
                    )));
                }
                let k = n + m;
                let mut angles = params.to_vec();
                let balance: f64 = -angles.iter().sum::<f64>();
                angles.push(balance);
                let mut x = DMatrix::<Complex64>::zeros(k, k);
                for (i, a) in angles.iter().enumerate() {
                    x[(i, i)] = c(0.0, *a);
                }
                GroupElement::from_generator(&x, 1.0, *n, *m)
            }
            SubgroupDescriptor::MaximalCompact { .. } | SubgroupDescriptor::RealForm { .. } => {
                Err(CoreError::DimensionMismatch(
                    "this subgroup is sampled, not parametrized".into(),
                ))
            }
        }
    }

    /// Uniform grid with equal weights: exact Haar average for the rotation
    /// circle and the torus once the grid outruns the frequency content.
    pub fn grid(&self, points_per_circle: usize) -> Result<Vec<(GroupElement, f64)>> {
        if points_per_circle == 0 {
            return Err(CoreError::EmptyInput("grid needs at least one point".into()));
        }
        match self {
            SubgroupDescriptor::Rotation => {
                let l = points_per_circle;
                (0..l)
                    .map(|k| {
                        let theta = 2.0 * PI * k as f64 / l as f64;
                        Ok((self.element(&[theta])?, 1.0 / l as f64))
                    })
                    .collect()
            }
            SubgroupDescriptor::Torus { n, m } => {
                let free = n + m - 1;
                let l = points_per_circle;
                let total = l.pow(free as u32);
                let mut out = Vec::with_capacity(total);
                for flat in 0..total {
                    let mut digits = flat;
                    let mut angles = Vec::with_capacity(free);
                    for _ in 0..free {
                        angles.push(2.0 * PI * (digits % l) as f64 / l as f64);
                        digits /= l;
                    }
                    out.push((self.element(&angles)?, 1.0 / total as f64));
                }
                Ok(out)
            }
            _ => Err(CoreError::NonCompactSubgroup),
        }
    }

    /// Random elements. Compact families draw Haar-distributed elements;
    /// the non-compact ones draw bounded parameters or Lie-algebra
    /// Gaussians, for invariance spot checks.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<GroupElement>> {
        if count == 0 {
            return Err(CoreError::EmptyInput("sample needs count > 0".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            SubgroupDescriptor::Rotation => (0..count)
                .map(|_| self.element(&[rng.gen::<f64>() * 2.0 * PI]))
                .collect(),
            SubgroupDescriptor::Hyperbolic | SubgroupDescriptor::ParabolicN => (0..count)
                .map(|_| self.element(&[3.0 * (rng.gen::<f64>() - 0.5)]))
                .collect(),
            SubgroupDescriptor::Torus { n, m } => {
                let free = n + m - 1;
                (0..count)
                    .map(|_| {
                        let angles: Vec<f64> =
                            (0..free).map(|_| rng.gen::<f64>() * 2.0 * PI).collect();
                        self.element(&angles)
                    })
                    .collect()
            }
            SubgroupDescriptor::MaximalCompact { n, m } => {
                haar_compact_elements(*n, *m, count, seed)
            }
            SubgroupDescriptor::RealForm { n } => (0..count)
                .map(|_| {
                    let x = random_real_form_generator(*n, &mut rng);
                    let g = GroupElement::from_generator(&x, 1.0, *n, 1)?;
                    // Real-coefficient check: the sampler must land in the
                    // real form, not just in SU(n,1).
                    let imag = g.matrix.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
                    if imag > 1e-10 {
                        return Err(CoreError::MembershipViolation { defect: imag });
                    }
                    Ok(g)
                })
                .collect(),
        }
    }
}

/// Haar samples of S(U(n) x U(m)): block-diagonal Haar pairs with a global
/// phase fixing det = 1, re-expressed through a principal logarithm so each
/// element carries a path into the identity component.
pub fn haar_compact_elements(
    n: usize,
    m: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<GroupElement>> {
    let rule = haar_unitary_sample(n, m, count, seed)?;
    let k = n + m;
    rule.nodes
        .iter()
        .map(|node| {
            let mut u = node.value.clone();
            let det = u.determinant();
            let phase = -det.arg() / k as f64;
            u *= Complex64::from_polar(1.0, phase);
            let x = unitary_log(&u)?;
            GroupElement::new(
                u,
                n,
                m,
                Some(PathData {
                    generator: x,
                    time: 1.0,
                }),
            )
        })
        .collect()
}

/// Principal logarithm of a unitary matrix via its spectral decomposition.
fn unitary_log(u: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let k = u.nrows();
    // Hermitian auxiliary: u = exp(iH) with H = H*; diagonalize (u + u*)/2
    // does not determine phases, so use the Schur-free route through the
    // eigendecomposition of the normal matrix u.
    let schur = u.clone().schur();
    let (q, t) = schur.unpack();
    // For a normal matrix the Schur form is diagonal to rounding.
    let mut logt = DMatrix::<Complex64>::zeros(k, k);
    for i in 0..k {
        let v = t[(i, i)];
        if v.norm() < 1e-14 {
            return Err(CoreError::SingularMatrix);
        }
        logt[(i, i)] = c(0.0, v.arg());
    }
    let off: f64 = (0..k)
        .flat_map(|i| (0..k).filter(move |j| *j != i).map(move |j| (i, j)))
        .map(|(i, j)| t[(i, j)].norm())
        .fold(0.0, f64::max);
    if off > 1e-8 {
        return Err(CoreError::Quadrature(format!(
            "unitary log: Schur form off-diagonal {off:.2e}"
        )));
    }
    Ok(&q * logt * q.adjoint())
}

/// Random element of so(n,1): [[S, b], [b^T, 0]] with S real skew.
fn random_real_form_generator(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let k = n + 1;
    let mut x = DMatrix::<Complex64>::zeros(k, k);
    let scale = 0.6;
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.sample(StandardNormal);
            x[(i, j)] = c(scale * v, 0.0);
            x[(j, i)] = c(-scale * v, 0.0);
        }
        let b: f64 = rng.sample(StandardNormal);
        x[(i, n)] = c(scale * b, 0.0);
        x[(n, i)] = c(scale * b, 0.0);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::DomainPoint;
    use crate::group::elements::mobius_apply;

    #[test]
    fn rotation_grid_is_uniform_circle() {
        let grid = SubgroupDescriptor::Rotation.grid(8).unwrap();
        assert_eq!(grid.len(), 8);
        let wsum: f64 = grid.iter().map(|(_, w)| w).sum();
        assert!((wsum - 1.0).abs() < 1e-15);
        let d = DomainDescriptor::unit_ball(1).unwrap();
        let z = DomainPoint::from_vector(vec![c(0.4, 0.0)]);
        // Element k rotates by 2 pi k / 8.
        let w = mobius_apply(&grid[2].0, &d, &z).unwrap().value[(0, 0)];
        let expect = c(0.4, 0.0) * Complex64::from_polar(1.0, PI / 2.0);
        assert!((w - expect).norm() < 1e-13);
    }

    #[test]
    fn torus_grid_acts_by_coordinate_phases() {
        let t = SubgroupDescriptor::Torus { n: 2, m: 2 };
        let grid = t.grid(3).unwrap();
        assert_eq!(grid.len(), 27);
        let d = DomainDescriptor::matrix_ball(2, 2).unwrap();
        let z = DomainPoint::from_matrix(DMatrix::from_fn(2, 2, |i, j| {
            c(0.1 + 0.05 * i as f64, 0.03 * j as f64)
        }));
        for (g, _) in grid.iter().take(9) {
            let w = mobius_apply(g, &d, &z).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (w.value[(i, j)].norm() - z.value[(i, j)].norm()).abs() < 1e-12,
                        "torus must preserve entry moduli"
                    );
                }
            }
        }
    }

    #[test]
    fn parabolic_generator_is_nilpotent_and_fixes_one() {
        let p = SubgroupDescriptor::ParabolicN;
        let x = p.disk_generator().unwrap();
        assert!((&x * &x).norm() < 1e-15);
        let g = p.element(&[0.9]).unwrap();
        // g fixes the boundary point 1: (a + b)/(c + d) = 1.
        let (a, b, cc, d) = g.blocks();
        let num = a[(0, 0)] + b[(0, 0)];
        let den = cc[(0, 0)] + d[(0, 0)];
        assert!((num / den - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn compact_samples_are_block_diagonal_members() {
        let k = SubgroupDescriptor::MaximalCompact { n: 2, m: 2 };
        let els = k.sample(6, 11).unwrap();
        assert_eq!(els.len(), 6);
        for g in &els {
            assert!(g.membership_defect < 1e-10);
            assert!(g.matrix.view((0, 2), (2, 2)).norm() < 1e-12);
            assert!(g.matrix.view((2, 0), (2, 2)).norm() < 1e-12);
            assert!((g.matrix.determinant() - c(1.0, 0.0)).norm() < 1e-10);
            // Path reproduces the element.
            let p = g.path.as_ref().unwrap();
            let re = crate::linalg::expm(&(p.generator.clone() * c(p.time, 0.0)));
            assert!((re - &g.matrix).norm() < 1e-10);
        }
    }

    #[test]
    fn real_form_samples_are_real_and_members() {
        let f = SubgroupDescriptor::RealForm { n: 2 };
        let els = f.sample(20, 7).unwrap();
        let d = DomainDescriptor::unit_ball(2).unwrap();
        let z = DomainPoint::from_vector(vec![c(0.2, 0.1), c(-0.1, 0.3)]);
        for g in &els {
            assert!(g.membership_defect < 1e-10);
            let imag = g.matrix.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            assert!(imag < 1e-12);
            // Acts on the ball.
            mobius_apply(g, &d, &z).unwrap();
        }
    }

    #[test]
    fn sampled_rotations_and_grids_reject_bad_input() {
        assert!(SubgroupDescriptor::Rotation.grid(0).is_err());
        assert!(matches!(
            SubgroupDescriptor::Hyperbolic.grid(4),
            Err(CoreError::NonCompactSubgroup)
        ));
        assert!(SubgroupDescriptor::Torus { n: 1, m: 1 }.element(&[0.1, 0.2]).is_err());
        let d = DomainDescriptor::matrix_ball(2, 2).unwrap();
        assert!(SubgroupDescriptor::Rotation.check_domain(&d).is_err());
        let ball = DomainDescriptor::unit_ball(2).unwrap();
        assert!(SubgroupDescriptor::RealForm { n: 2 }.check_domain(&ball).is_ok());
    }
}
