//! Gauss-Jacobi nodes and weights on [0, 1] for the weight t^a (1-t)^b,
//! computed by the Golub-Welsch eigenvalue method from the monic Jacobi
//! three-term recurrence.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::CoreError;
use crate::Result;

/// q nodes and weights on (0, 1) integrating t^a (1-t)^b dt exactly against
/// polynomials of degree <= 2q - 1. Weights are normalized to sum to 1, so
/// the Beta-function mass of the weight never appears.
pub fn gauss_jacobi_unit(q: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if q == 0 {
        return Err(CoreError::Quadrature("need at least one node".into()));
    }
    if a <= -1.0 || b <= -1.0 {
        return Err(CoreError::Quadrature(format!(
            "jacobi exponents must exceed -1, got a={a}, b={b}"
        )));
    }
    // Classical Jacobi weight on [-1,1] is (1-x)^alpha (1+x)^beta; mapping
    // t = (1+x)/2 sends t^a (1-t)^b to alpha = b, beta = a.
    let (alpha, beta) = (b, a);
    let mut t = DMatrix::<f64>::zeros(q, q);
    for k in 0..q {
        t[(k, k)] = jacobi_alpha_k(k as f64, alpha, beta);
        if k + 1 < q {
            let off = jacobi_beta_k((k + 1) as f64, alpha, beta).sqrt();
            t[(k, k + 1)] = off;
            t[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..q)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = eig.eigenvectors[(0, i)].powi(2);
            (x, w)
        })
        .collect();
    pairs.sort_by(|p, r| p.0.partial_cmp(&r.0).expect("finite eigenvalues"));
    let wsum: f64 = pairs.iter().map(|p| p.1).sum();
    let nodes = pairs.iter().map(|p| (1.0 + p.0) / 2.0).collect();
    let weights = pairs.iter().map(|p| p.1 / wsum).collect();
    Ok((nodes, weights))
}

/// Diagonal recurrence coefficient a_k of the monic Jacobi polynomials.
fn jacobi_alpha_k(k: f64, alpha: f64, beta: f64) -> f64 {
    if k == 0.0 {
        // Cancels the (alpha + beta) factor that vanishes when alpha = -beta.
        return (beta - alpha) / (alpha + beta + 2.0);
    }
    let num = beta * beta - alpha * alpha;
    let den = (2.0 * k + alpha + beta) * (2.0 * k + alpha + beta + 2.0);
    num / den
}

/// Off-diagonal recurrence coefficient b_k (k >= 1) of the monic Jacobi
/// polynomials; the Golub-Welsch tridiagonal carries sqrt(b_k).
fn jacobi_beta_k(k: f64, alpha: f64, beta: f64) -> f64 {
    let s = 2.0 * k + alpha + beta;
    4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta) / (s * s * (s + 1.0) * (s - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Beta(a+1, b+1)-relative moments: integral of t^j t^a (1-t)^b over
    /// the full mass, computed by the stable product form
    /// prod_{i=0}^{j-1} (a+1+i)/(a+b+2+i).
    fn moment_ratio(j: u32, a: f64, b: f64) -> f64 {
        let mut r = 1.0;
        for i in 0..j {
            r *= (a + 1.0 + i as f64) / (a + b + 2.0 + i as f64);
        }
        r
    }

    #[test]
    fn legendre_case_matches_uniform_moments() {
        let (x, w) = gauss_jacobi_unit(5, 0.0, 0.0).unwrap();
        for j in 0..=9u32 {
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| xi.powi(j as i32) * wi).sum();
            let want = 1.0 / (j as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "degree {j}: {got} vs {want}");
        }
    }

    #[test]
    fn jacobi_weight_moments_exact_to_design_degree() {
        for &(a, b) in &[(0.0, 1.5), (1.0, 0.5), (0.0, -0.5), (2.0, 3.0)] {
            for q in 1..=8usize {
                let (x, w) = gauss_jacobi_unit(q, a, b).unwrap();
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
                for j in 0..=(2 * q - 1) as u32 {
                    let got: f64 =
                        x.iter().zip(&w).map(|(xi, wi)| xi.powi(j as i32) * wi).sum();
                    let want = moment_ratio(j, a, b);
                    assert!(
                        (got - want).abs() < 1e-13 * want.max(1.0),
                        "a={a} b={b} q={q} degree {j}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn nodes_live_inside_the_interval() {
        let (x, _) = gauss_jacobi_unit(12, 0.0, 2.5).unwrap();
        for xi in &x {
            assert!(*xi > 0.0 && *xi < 1.0);
        }
        for pair in x.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(gauss_jacobi_unit(3, -1.0, 0.0).is_err());
        assert!(gauss_jacobi_unit(0, 0.0, 0.0).is_err());
    }
}
