//! Small dense linear algebra helpers shared across the crate: norms,
//! conditioning, nullspaces, triangular inversion, and the matrix
//! exponential.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::CoreError;
use crate::Result;

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn frobenius_norm(a: &DMatrix<Complex64>) -> f64 {
    a.norm()
}

pub fn max_abs(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Two-norm condition number; infinite when the smallest singular value
/// underflows against the largest.
pub fn condition_number(a: &DMatrix<Complex64>) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= smax * f64::EPSILON * 1e-4 || smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// ||A - A^H||, gauge of how far a should-be-Hermitian matrix drifted.
pub fn hermitian_defect(a: &DMatrix<Complex64>) -> f64 {
    (a - a.adjoint()).norm()
}

/// Orthonormal basis of the right nullspace {x : A x = 0}, columns of the
/// returned matrix. `rel_tol` is measured against the largest singular
/// value.
///
/// nalgebra's thin SVD keeps only min(rows, cols) right singular vectors, so
/// a wide matrix is padded with zero rows first to expose the full
/// nullspace.
pub fn nullspace(a: &DMatrix<Complex64>, rel_tol: f64) -> DMatrix<Complex64> {
    let n = a.ncols();
    let padded = if a.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return DMatrix::identity(n, n);
    }
    let tol = smax * rel_tol;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol)
        .collect();
    let mut basis = DMatrix::zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        for k in 0..n {
            basis[(k, j)] = v_t[(i, k)].conj();
        }
    }
    basis
}

/// Lower Cholesky factor of a Hermitian positive definite matrix, with
/// explicit pivot checks. nalgebra's complex Cholesky takes square roots of
/// negative pivots without failing, so indefinite input must be rejected
/// here.
pub fn cholesky_lower(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(CoreError::ShapeMismatch("cholesky wants square".into()));
    }
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let mut pivot = a[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(CoreError::NotPositiveDefinite);
        }
        let d = pivot.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Inverse of an upper triangular matrix by back substitution.
pub fn invert_upper_triangular(u: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(CoreError::ShapeMismatch("triangular inverse wants square".into()));
    }
    let mut inv = DMatrix::<Complex64>::zeros(n, n);
    for j in (0..n).rev() {
        let d = u[(j, j)];
        if d.norm() == 0.0 {
            return Err(CoreError::SingularMatrix);
        }
        inv[(j, j)] = Complex64::new(1.0, 0.0) / d;
        for i in (0..j).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in (i + 1)..=j {
                s += u[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / u[(i, i)];
        }
    }
    Ok(inv)
}

/// Matrix exponential, scaling and squaring with the degree-13 Pade
/// approximant.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm wants a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm_1 = one_norm(a);
    const THETA_13: f64 = 5.371920351148152;
    let s = if norm_1 > THETA_13 {
        (norm_1 / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scale = Complex64::new(0.5f64.powi(s), 0.0);
    let a_s = a * scale;
    let e = pade_13(&a_s);
    let mut r = e;
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn pade_13(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let n = a.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let c = |k: usize| Complex64::new(B[k], 0.0);
    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9))
        + &a6 * c(7)
        + &a4 * c(5)
        + &a2 * c(3)
        + &id * c(1);
    let u = a * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8))
        + &a6 * c(6)
        + &a4 * c(4)
        + &a2 * c(2)
        + &id * c(0);
    let p = &v + &u;
    let q = &v - &u;
    q.lu().solve(&p).expect("pade denominator is invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spectral_norm_rank_one() {
        let a = DMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(4.0, 0.0), c(0.0, 0.0)]);
        assert_relative_eq!(spectral_norm(&a), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        // One equation in three unknowns: nullspace has dimension 2.
        let a = DMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.ncols(), 2);
        let residual = &a * &ns;
        assert!(residual.norm() < 1e-12);
        let gram = ns.adjoint() * &ns;
        assert!((gram - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn nullspace_of_zero_matrix_is_full() {
        let a = DMatrix::<Complex64>::zeros(2, 3);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.ncols(), 3);
    }

    #[test]
    fn cholesky_round_trip_and_rejection() {
        let b = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.3, 0.4), c(0.2, -0.1), c(1.0, 0.0)],
        );
        let a = &b * b.adjoint() + DMatrix::<Complex64>::identity(2, 2) * c(0.5, 0.0);
        let l = cholesky_lower(&a).unwrap();
        assert!((&l * l.adjoint() - &a).norm() < 1e-14);
        for i in 0..2 {
            assert!(l[(i, i)].re > 0.0);
            assert_eq!(l[(i, i)].im, 0.0);
        }
        let indefinite = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(-1.0, 0.0),
        ]));
        assert!(matches!(
            cholesky_lower(&indefinite),
            Err(CoreError::NotPositiveDefinite)
        ));
        let singular = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        );
        assert!(cholesky_lower(&singular).is_err());
    }

    #[test]
    fn triangular_inverse_round_trip() {
        let u = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0), c(1.0, 1.0), c(-0.5, 0.3),
                c(0.0, 0.0), c(1.5, 0.0), c(0.7, -0.2),
                c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0),
            ],
        );
        let inv = invert_upper_triangular(&u).unwrap();
        let id = &u * &inv;
        assert!((id - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn triangular_inverse_rejects_singular() {
        let u = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(invert_upper_triangular(&u), Err(CoreError::SingularMatrix)));
    }

    #[test]
    fn expm_diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(0.0, std::f64::consts::PI),
        ]));
        let e = expm(&a);
        assert_relative_eq!(e[(0, 0)].re, std::f64::consts::E, epsilon = 1e-13);
        assert_relative_eq!(e[(1, 1)].re, -1.0, epsilon = 1e-13);
        assert!(e[(1, 1)].im.abs() < 1e-13);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn expm_nilpotent() {
        // X^2 = 0 means exp(X) = I + X exactly.
        let x = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 1.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, -1.0)],
        );
        assert!((&x * &x).norm() < 1e-30);
        let e = expm(&x);
        let expected = DMatrix::<Complex64>::identity(2, 2) + &x;
        assert!((e - expected).norm() < 1e-14);
    }

    #[test]
    fn expm_matches_series_on_rotation_generator() {
        // exp(t [[0,1],[1,0]]) = [[cosh t, sinh t], [sinh t, cosh t]].
        let t = 0.7;
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(t, 0.0), c(t, 0.0), c(0.0, 0.0)]);
        let e = expm(&x);
        assert_relative_eq!(e[(0, 0)].re, t.cosh(), epsilon = 1e-13);
        assert_relative_eq!(e[(0, 1)].re, t.sinh(), epsilon = 1e-13);
    }

    #[test]
    fn expm_large_norm_uses_squaring() {
        let t = 20.0;
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(t, 0.0), c(t, 0.0), c(0.0, 0.0)]);
        let e = expm(&x);
        assert_relative_eq!(e[(0, 0)].re, t.cosh(), max_relative = 1e-12);
        assert_relative_eq!(e[(0, 1)].re, t.sinh(), max_relative = 1e-12);
    }

    #[test]
    fn condition_number_of_identity() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert_relative_eq!(condition_number(&id), 1.0, epsilon = 1e-12);
        let sing = DMatrix::<Complex64>::zeros(2, 2);
        assert!(condition_number(&sing).is_infinite());
    }
}
