//! Elements of SU(n,m): membership, the Mobius action on the matrix ball,
//! the triangular-times-block factorization, and holomorphic Jacobian
//! factors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::domains::{DomainDescriptor, DomainPoint};
use crate::error::CoreError;
use crate::linalg::expm;
use crate::Result;

pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// One-parameter path record: element = exp(time * generator).
#[derive(Clone, Debug)]
pub struct PathData {
    pub generator: DMatrix<Complex64>,
    pub time: f64,
}

/// An element of SU(n,m) acting on n x m matrices, optionally carrying the
/// one-parameter path that produced it (required wherever fractional
/// automorphy powers need continuous phase tracking).
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: DMatrix<Complex64>,
    pub n: usize,
    pub m: usize,
    pub path: Option<PathData>,
    /// max(||g* J g - J||, |det g - 1|) at construction.
    pub membership_defect: f64,
}

/// The defining form J = diag(I_n, -I_m).
pub fn signature_matrix(n: usize, m: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n + m, n + m, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else if i < n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    })
}

fn membership_defect(matrix: &DMatrix<Complex64>, n: usize, m: usize) -> f64 {
    let j = signature_matrix(n, m);
    let form = matrix.adjoint() * &j * matrix - &j;
    let det = matrix.determinant();
    form.norm().max((det - Complex64::new(1.0, 0.0)).norm())
}

impl GroupElement {
    /// Wraps a matrix, enforcing g* J g = J and det g = 1 within tolerance.
    pub fn new(
        matrix: DMatrix<Complex64>,
        n: usize,
        m: usize,
        path: Option<PathData>,
    ) -> Result<Self> {
        if matrix.nrows() != n + m || matrix.ncols() != n + m {
            return Err(CoreError::ShapeMismatch(format!(
                "group element must be {0}x{0}",
                n + m
            )));
        }
        let defect = membership_defect(&matrix, n, m);
        if !(defect < MEMBERSHIP_TOL) {
            return Err(CoreError::MembershipViolation { defect });
        }
        Ok(Self {
            matrix,
            n,
            m,
            path,
            membership_defect: defect,
        })
    }

    /// exp(t X) with the path recorded. X must lie in su(n,m).
    pub fn from_generator(x: &DMatrix<Complex64>, t: f64, n: usize, m: usize) -> Result<Self> {
        let g = expm(&(x * Complex64::new(t, 0.0)));
        Self::new(
            g,
            n,
            m,
            Some(PathData {
                generator: x.clone(),
                time: t,
            }),
        )
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n + m, n + m),
            n,
            m,
            path: Some(PathData {
                generator: DMatrix::zeros(n + m, n + m),
                time: 0.0,
            }),
            membership_defect: 0.0,
        }
    }

    /// g^{-1} = J g* J; a recorded path negates its time.
    pub fn inverse(&self) -> Self {
        let j = signature_matrix(self.n, self.m);
        let inv = &j * self.matrix.adjoint() * &j;
        let defect = membership_defect(&inv, self.n, self.m);
        Self {
            matrix: inv,
            n: self.n,
            m: self.m,
            path: self.path.as_ref().map(|p| PathData {
                generator: p.generator.clone(),
                time: -p.time,
            }),
            membership_defect: defect,
        }
    }

    /// Matrix product; composition has no single-generator path.
    pub fn compose(&self, other: &GroupElement) -> Result<Self> {
        if self.n != other.n || self.m != other.m {
            return Err(CoreError::DimensionMismatch(
                "composing elements of different groups".into(),
            ));
        }
        GroupElement::new(&self.matrix * &other.matrix, self.n, self.m, None)
    }

    /// The four blocks (A, B, C, D) of the (n+m) partition.
    pub fn blocks(
        &self,
    ) -> (
        DMatrix<Complex64>,
        DMatrix<Complex64>,
        DMatrix<Complex64>,
        DMatrix<Complex64>,
    ) {
        let (n, m) = (self.n, self.m);
        (
            self.matrix.view((0, 0), (n, n)).into(),
            self.matrix.view((0, n), (n, m)).into(),
            self.matrix.view((n, 0), (m, n)).into(),
            self.matrix.view((n, n), (m, m)).into(),
        )
    }

    /// Whether the generator (if any) is block-diagonal, so the action
    /// preserves polynomial degree.
    pub fn has_compact_type_path(&self) -> bool {
        match &self.path {
            None => false,
            Some(p) => {
                let (n, m) = (self.n, self.m);
                let b = p.generator.view((0, n), (n, m)).norm();
                let c = p.generator.view((n, 0), (m, n)).norm();
                b < 1e-13 && c < 1e-13
            }
        }
    }
}

/// The Mobius action (AZ + B)(CZ + D)^{-1}; the image of an interior point
/// stays interior and is asserted to.
pub fn mobius_apply(
    g: &GroupElement,
    domain: &DomainDescriptor,
    point: &DomainPoint,
) -> Result<DomainPoint> {
    if domain.rows() != g.n || domain.cols() != g.m {
        return Err(CoreError::ShapeMismatch(
            "group does not act on this domain shape".into(),
        ));
    }
    if !domain.contains(point)? {
        return Err(CoreError::OutsideDomain);
    }
    let (a, b, c, d) = g.blocks();
    let z = &point.value;
    let num = &a * z + b;
    let den = &c * z + d;
    // W = num * den^{-1}, computed as den^T W^T = num^T without forming
    // the inverse.
    let lu = den.transpose().lu();
    let wt = lu
        .solve(&num.transpose())
        .ok_or(CoreError::SingularMatrix)?;
    let w = DomainPoint::from_matrix(wt.transpose());
    if !domain.contains(&w)? {
        return Err(CoreError::MembershipViolation {
            defect: domain.op_norm(&w)? - 1.0,
        });
    }
    Ok(w)
}

/// Triangular factorization over the dense set where D is invertible:
/// p_plus = B D^{-1}, k = (A - B D^{-1} C, D), p_minus = D^{-1} C.
#[allow(clippy::type_complexity)]
pub fn pkp_factorize(
    g: &GroupElement,
) -> Result<(
    DMatrix<Complex64>,
    (DMatrix<Complex64>, DMatrix<Complex64>),
    DMatrix<Complex64>,
)> {
    let (a, b, c, d) = g.blocks();
    let lu = d.clone().lu();
    if !lu.is_invertible() {
        return Err(CoreError::SingularMatrix);
    }
    let d_inv_c = lu.solve(&c).ok_or(CoreError::SingularMatrix)?;
    // B D^{-1} via the transposed system.
    let lut = d.transpose().lu();
    let p_plus = lut
        .solve(&b.transpose())
        .ok_or(CoreError::SingularMatrix)?
        .transpose();
    let k1 = &a - &p_plus * &c;
    Ok((p_plus, (k1, d), d_inv_c))
}

/// The holomorphic Jacobian factor j(g, Z) = det(CZ + D)^{-(n+m)}.
pub fn jacobian_factor(
    g: &GroupElement,
    domain: &DomainDescriptor,
    point: &DomainPoint,
) -> Result<Complex64> {
    if domain.rows() != g.n || domain.cols() != g.m {
        return Err(CoreError::ShapeMismatch(
            "group does not act on this domain shape".into(),
        ));
    }
    let (_, _, c, d) = g.blocks();
    let den = (&c * &point.value + d).determinant();
    if den.norm() < 1e-300 {
        return Err(CoreError::SingularMatrix);
    }
    let p = (g.n + g.m) as i32;
    Ok(den.powi(-p))
}
