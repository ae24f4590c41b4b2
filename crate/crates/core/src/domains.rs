//! Bounded symmetric domain descriptors, membership tests, the weighted
//! measure density, and monomial multi-index enumeration.
//!
//! Two families are supported: the unit ball of C^n and the matrix ball
//! {Z in C^(n x m) : ||Z||_op < 1}. The unit ball of C^n is the m = 1 matrix
//! ball; every operation treats it that way, with points stored as n x 1
//! matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::Result;

/// Which domain family, with its size parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    UnitBall { n: usize },
    MatrixBall { n: usize, m: usize },
}

/// A domain together with its derived structure constants.
///
/// Invariant: genus * rank = dim + tube_dim exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainDescriptor {
    pub kind: DomainKind,
    /// Complex dimension (n for the ball, n*m for the matrix ball).
    pub dim: usize,
    pub rank: usize,
    pub tube_dim: usize,
    /// The genus p = (dim + tube_dim) / rank.
    pub genus: usize,
}

/// Builds a descriptor, filling in rank, tube dimension and genus.
pub fn make_domain(kind: DomainKind) -> Result<DomainDescriptor> {
    let (dim, rank, tube_dim) = match kind {
        DomainKind::UnitBall { n } => {
            if n == 0 {
                return Err(CoreError::InvalidDomain("unit ball needs n >= 1".into()));
            }
            (n, 1, 1)
        }
        DomainKind::MatrixBall { n, m } => {
            if n == 0 || m == 0 {
                return Err(CoreError::InvalidDomain(
                    "matrix ball needs n, m >= 1".into(),
                ));
            }
            let r = n.min(m);
            (n * m, r, r * r)
        }
    };
    // The genus formula must divide exactly for every supported family.
    if (dim + tube_dim) % rank != 0 {
        return Err(CoreError::InvalidDomain(format!(
            "genus formula not integral for {kind:?}"
        )));
    }
    Ok(DomainDescriptor {
        kind,
        dim,
        rank,
        tube_dim,
        genus: (dim + tube_dim) / rank,
    })
}

impl DomainDescriptor {
    pub fn unit_ball(n: usize) -> Result<Self> {
        make_domain(DomainKind::UnitBall { n })
    }

    pub fn matrix_ball(n: usize, m: usize) -> Result<Self> {
        make_domain(DomainKind::MatrixBall { n, m })
    }

    /// Row count of a point matrix.
    pub fn rows(&self) -> usize {
        match self.kind {
            DomainKind::UnitBall { n } => n,
            DomainKind::MatrixBall { n, .. } => n,
        }
    }

    /// Column count of a point matrix (1 for the unit ball).
    pub fn cols(&self) -> usize {
        match self.kind {
            DomainKind::UnitBall { .. } => 1,
            DomainKind::MatrixBall { m, .. } => m,
        }
    }

    /// Smallest admissible weight is open: lambda must exceed genus - 1.
    pub fn lambda_min(&self) -> f64 {
        (self.genus - 1) as f64
    }

    pub fn check_lambda(&self, lambda: f64) -> Result<()> {
        if !(lambda > self.lambda_min()) {
            return Err(CoreError::LambdaOutOfRange {
                lambda,
                min: self.lambda_min(),
            });
        }
        Ok(())
    }

    fn check_shape(&self, point: &DomainPoint) -> Result<()> {
        if point.value.nrows() != self.rows() || point.value.ncols() != self.cols() {
            return Err(CoreError::ShapeMismatch(format!(
                "point is {}x{}, domain wants {}x{}",
                point.value.nrows(),
                point.value.ncols(),
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }

    /// det(I - Z Z*) when the point is strictly inside, None otherwise.
    ///
    /// Evaluated on the smaller Gram side; for 2 x 2 and vector shapes a
    /// closed form avoids the factorization.
    pub fn det_complement(&self, point: &DomainPoint) -> Option<f64> {
        let z = &point.value;
        let (r, c) = (z.nrows(), z.ncols());
        if r == 1 || c == 1 {
            let d = 1.0 - z.norm_squared();
            return (d > 0.0).then_some(d);
        }
        if r == 2 && c == 2 {
            let t = z.norm_squared();
            let det = z[(0, 0)] * z[(1, 1)] - z[(0, 1)] * z[(1, 0)];
            let dd = det.norm_sqr();
            let d = 1.0 - t + dd;
            // Both eigenvalues of Z*Z are below 1 iff det(I - Z*Z) > 0 and tr(Z*Z) < 2.
            return (d > 0.0 && t < 2.0).then_some(d);
        }
        let gram = if c <= r {
            z.adjoint() * z
        } else {
            z * z.adjoint()
        };
        let k = gram.nrows();
        let h = DMatrix::<Complex64>::identity(k, k) - gram;
        let l = crate::linalg::cholesky_lower(&h).ok()?;
        let mut d = 1.0;
        for i in 0..k {
            let li = l[(i, i)].re;
            d *= li * li;
        }
        Some(d)
    }

    /// Strict membership: largest singular value below 1.
    pub fn contains(&self, point: &DomainPoint) -> Result<bool> {
        self.check_shape(point)?;
        Ok(self.det_complement(point).is_some())
    }

    /// Largest singular value of the point matrix.
    pub fn op_norm(&self, point: &DomainPoint) -> Result<f64> {
        self.check_shape(point)?;
        let z = &point.value;
        if z.ncols() == 1 || z.nrows() == 1 {
            return Ok(z.norm());
        }
        if z.nrows() == 2 && z.ncols() == 2 {
            let t = z.norm_squared();
            let det = z[(0, 0)] * z[(1, 1)] - z[(0, 1)] * z[(1, 0)];
            let disc = (t * t - 4.0 * det.norm_sqr()).max(0.0);
            return Ok(((t + disc.sqrt()) / 2.0).sqrt());
        }
        let sv = z.clone().svd(false, false).singular_values;
        Ok(sv.iter().cloned().fold(0.0, f64::max))
    }

    /// Unnormalized weighted density det(I - Z Z*)^(lambda - genus).
    ///
    /// Integrals are always taken as ratios against the mass of 1, so the
    /// normalizing constant of the measure is never needed.
    pub fn density_unnormalized(&self, lambda: f64, point: &DomainPoint) -> Result<f64> {
        self.check_lambda(lambda)?;
        self.check_shape(point)?;
        let d = self
            .det_complement(point)
            .ok_or(CoreError::OutsideDomain)?;
        Ok(d.powf(lambda - self.genus as f64))
    }

    /// All exponent grids of total degree at most max_degree, in graded
    /// order: degree first, then ascending lexicographic comparison of the
    /// flattened row-major entries.
    pub fn multi_index_enumerate(&self, max_degree: u32) -> Vec<MultiIndex> {
        let (rows, cols) = (self.rows(), self.cols());
        let len = rows * cols;
        let mut out = Vec::new();
        let mut cur = vec![0u32; len];
        for deg in 0..=max_degree {
            compositions_lex(deg, 0, &mut cur, rows, cols, &mut out);
        }
        out
    }
}

fn compositions_lex(
    remaining: u32,
    pos: usize,
    cur: &mut Vec<u32>,
    rows: usize,
    cols: usize,
    out: &mut Vec<MultiIndex>,
) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex {
            rows,
            cols,
            entries: cur.clone(),
        });
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        compositions_lex(remaining - e, pos + 1, cur, rows, cols, out);
    }
}

/// Exponent grid of a monomial z^alpha, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(CoreError::ShapeMismatch(format!(
                "multi-index wants {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn entry(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    /// Per-row exponent sums; half of the torus weight of the monomial.
    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.entry(r, c)).sum())
            .collect()
    }

    /// Per-column exponent sums; the other half of the torus weight.
    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.entry(r, c)).sum())
            .collect()
    }

    /// Whether two monomials transform identically under the diagonal
    /// torus, i.e. share row and column exponent sums. Inner products
    /// across distinct weights vanish by torus invariance of the measure.
    pub fn same_torus_weight(&self, other: &MultiIndex) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.row_sums() == other.row_sums()
            && self.col_sums() == other.col_sums()
    }
}

/// A point of the domain: an n x m complex matrix (n x 1 for the ball).
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPoint {
    pub value: DMatrix<Complex64>,
}

impl DomainPoint {
    pub fn from_matrix(value: DMatrix<Complex64>) -> Self {
        Self { value }
    }

    /// Column vector point for ball-shaped domains.
    pub fn from_vector(v: Vec<Complex64>) -> Self {
        let n = v.len();
        Self {
            value: DMatrix::from_vec(n, 1, v),
        }
    }

    pub fn origin(rows: usize, cols: usize) -> Self {
        Self {
            value: DMatrix::zeros(rows, cols),
        }
    }

    /// z^alpha as a plain product of entry powers.
    pub fn monomial(&self, alpha: &MultiIndex) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for r in 0..alpha.rows {
            for c in 0..alpha.cols {
                let e = alpha.entry(r, c);
                if e > 0 {
                    acc *= self.value[(r, c)].powu(e);
                }
            }
        }
        acc
    }
}
