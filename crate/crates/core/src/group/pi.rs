//! The weighted action pi_lambda(g) f = j(g^{-1}, .)^{lambda/p} f(g^{-1} .)
//! compressed to a basis truncation. Elements whose generator is
//! block-diagonal preserve degree, so the matrix is exact; all others go
//! through quadrature and are flagged as observed. Fractional automorphy
//! powers are defined by continuous phase tracking along the element's
//! one-parameter path.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use crate::basis::BasisHandle;
use crate::domains::{DomainDescriptor, DomainPoint};
use crate::error::CoreError;
use crate::group::elements::{mobius_apply, GroupElement};
use crate::linalg::{expm, invert_upper_triangular, spectral_norm};
use crate::quadrature::QuadratureRule;
use crate::symbols::{InvarianceClass, SymbolSpec};
use crate::toeplitz::{rule_description, toeplitz_matrix, Exactness, OperatorMatrix, Provenance};
use crate::Result;

const PHASE_STEPS_INITIAL: usize = 16;
const PHASE_STEPS_CAP: usize = 4096;

/// Sparse polynomial in the matrix entries, keyed by row-major exponents.
type PolyMap = HashMap<Vec<u32>, Complex64>;

fn poly_mul(a: &PolyMap, b: &PolyMap) -> PolyMap {
    let mut out = PolyMap::with_capacity(a.len() * b.len());
    for (ea, ca) in a {
        for (eb, cb) in b {
            let key: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(key).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
        }
    }
    out
}

/// Coefficient matrix of f -> f(A Z E) on the monomial list: column j holds
/// the expansion of z^{alpha_j} composed with the linear substitution.
fn substitution_matrix(
    basis: &BasisHandle,
    a: &DMatrix<Complex64>,
    e: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>> {
    let (rows, cols) = (basis.domain.rows(), basis.domain.cols());
    let nvars = rows * cols;
    let dim = basis.dim();
    let position: HashMap<&[u32], usize> = basis
        .index_list
        .iter()
        .enumerate()
        .map(|(i, mi)| (mi.entries.as_slice(), i))
        .collect();
    // Linear forms W_rc = sum_{ab} A_ra Z_ab E_bc.
    let mut entry_polys = Vec::with_capacity(nvars);
    for r in 0..rows {
        for cidx in 0..cols {
            let mut p = PolyMap::new();
            for ar in 0..rows {
                for bc in 0..cols {
                    let coeff = a[(r, ar)] * e[(bc, cidx)];
                    if coeff.norm() > 0.0 {
                        let mut key = vec![0u32; nvars];
                        key[ar * cols + bc] = 1;
                        p.insert(key, coeff);
                    }
                }
            }
            entry_polys.push(p);
        }
    }
    let one: PolyMap = {
        let mut p = PolyMap::new();
        p.insert(vec![0u32; nvars], Complex64::new(1.0, 0.0));
        p
    };
    let mut s = DMatrix::<Complex64>::zeros(dim, dim);
    for (j, mi) in basis.index_list.iter().enumerate() {
        let mut acc = one.clone();
        for (v, &pow) in mi.entries.iter().enumerate() {
            for _ in 0..pow {
                acc = poly_mul(&acc, &entry_polys[v]);
            }
        }
        for (key, coeff) in acc {
            let i = *position.get(key.as_slice()).ok_or_else(|| {
                CoreError::BasisMismatch(
                    "substitution image".into(),
                    "index list is not degree-closed".into(),
                )
            })?;
            s[(i, j)] = coeff;
        }
    }
    Ok(s)
}

/// det(C_h z + D_h)^{-lambda} for the element h itself, with the branch
/// fixed by continuity along s -> exp(s X) from the identity. Callers
/// wanting j(g^{-1}, z)^{lambda/p} pass g.inverse(). Returns one value per
/// point.
pub fn automorphy_power(
    g: &GroupElement,
    domain: &DomainDescriptor,
    points: &[DomainPoint],
    lambda: f64,
) -> Result<Vec<Complex64>> {
    let path = g.path.as_ref().ok_or(CoreError::PathRequired)?;
    let (n, m) = (g.n, g.m);
    if domain.rows() != n || domain.cols() != m {
        return Err(CoreError::ShapeMismatch(
            "group does not act on this domain shape".into(),
        ));
    }
    let mut steps = PHASE_STEPS_INITIAL;
    loop {
        // Blocks of exp(s X) on the step grid from the identity to h.
        let mut cd = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let s = path.time * i as f64 / steps as f64;
            let gs = expm(&(path.generator.clone() * Complex64::new(s, 0.0)));
            let c_blk: DMatrix<Complex64> = gs.view((n, 0), (m, n)).into();
            let d_blk: DMatrix<Complex64> = gs.view((n, n), (m, m)).into();
            cd.push((c_blk, d_blk));
        }
        let mut out = Vec::with_capacity(points.len());
        let mut needs_refine = false;
        'points: for p in points {
            let mut prev = Complex64::new(1.0, 0.0);
            let mut arg_cont = 0.0;
            for (c_blk, d_blk) in &cd {
                let h = (c_blk * &p.value + d_blk).determinant();
                if h.norm() < 1e-300 {
                    return Err(CoreError::PhaseTracking(
                        "automorphy factor vanished along the path".into(),
                    ));
                }
                let delta = (h / prev).arg();
                if delta.abs() >= FRAC_PI_4 {
                    needs_refine = true;
                    break 'points;
                }
                arg_cont += delta;
                prev = h;
            }
            let modulus = prev.norm().powf(-lambda);
            out.push(Complex64::from_polar(modulus, -lambda * arg_cont));
        }
        if !needs_refine {
            return Ok(out);
        }
        if steps >= PHASE_STEPS_CAP {
            return Err(CoreError::PhaseTracking(format!(
                "phase increments stay above pi/4 at {steps} steps"
            )));
        }
        steps *= 2;
    }
}

/// Matrix of pi_lambda(g) on the orthonormal truncation. Block-diagonal
/// paths are expanded exactly; otherwise the compression is computed with
/// the supplied rule and flagged observed. `require_exact` turns the
/// inexact branch into an error.
pub fn pi_lambda_matrix(
    basis: &BasisHandle,
    g: &GroupElement,
    rule: Option<&QuadratureRule>,
    require_exact: bool,
) -> Result<OperatorMatrix> {
    let (n, m) = (basis.domain.rows(), basis.domain.cols());
    if g.n != n || g.m != m {
        return Err(CoreError::ShapeMismatch(
            "group does not act on this domain shape".into(),
        ));
    }
    let path = g.path.as_ref().ok_or(CoreError::PathRequired)?;
    let lambda = basis.lambda;

    if g.has_compact_type_path() {
        let xa: DMatrix<Complex64> = path.generator.view((0, 0), (n, n)).into();
        let xd: DMatrix<Complex64> = path.generator.view((n, n), (m, m)).into();
        let t = Complex64::new(path.time, 0.0);
        // g^{-1} z = exp(-t X_A) z exp(t X_D); the automorphy factor
        // det(exp(-t X_D))^{-p} has the continuous lambda/p power
        // exp(lambda t tr X_D).
        let a = expm(&(xa.clone() * -t));
        let e = expm(&(xd.clone() * t));
        let jfac = (Complex64::new(lambda, 0.0) * t * xd.trace()).exp();
        let s = substitution_matrix(basis, &a, &e)?;
        let u_inv = invert_upper_triangular(&basis.transform)?;
        let entries = u_inv * (s * jfac) * &basis.transform;
        return Ok(OperatorMatrix {
            entries,
            basis_id: basis.basis_id.clone(),
            lambda,
            meta: Provenance {
                symbol: format!("pi_lambda[compact_path, t={}]", path.time),
                rule: "degree_preserving_substitution".into(),
                seed: None,
                exactness: Exactness::Exact,
            },
            norm_bound_defect: 0.0,
        });
    }

    if require_exact {
        return Err(CoreError::NonCompactExactness);
    }
    let rule = rule.ok_or_else(|| {
        CoreError::Quadrature("non-compact pi_lambda needs an integration rule".into())
    })?;
    rule.check_matches(&basis.domain, lambda)?;

    let g_inv = g.inverse();
    let jpow = automorphy_power(&g_inv, &basis.domain, &rule.nodes, lambda)?;
    let dim = basis.dim();
    let len = rule.len();
    // M = P^H diag(w jpow) Q with P rows e(z_k), Q rows e(g^{-1} z_k).
    let mut p = DMatrix::<Complex64>::zeros(len, dim);
    let mut q = DMatrix::<Complex64>::zeros(len, dim);
    for (k, node) in rule.nodes.iter().enumerate() {
        let w = mobius_apply(&g_inv, &basis.domain, node)?;
        let ez: DVector<Complex64> = basis.eval_orthonormal(node)?;
        let ew: DVector<Complex64> = basis.eval_orthonormal(&w)?;
        let scale = jpow[k] * Complex64::new(rule.weights[k], 0.0);
        for i in 0..dim {
            p[(k, i)] = ez[i];
            q[(k, i)] = ew[i] * scale;
        }
    }
    let entries = p.adjoint() * q;
    for v in entries.iter() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(CoreError::NonFiniteIntegrand { index: 0 });
        }
    }
    Ok(OperatorMatrix {
        entries,
        basis_id: basis.basis_id.clone(),
        lambda,
        meta: Provenance {
            symbol: format!("pi_lambda[quadrature_path, t={}]", path.time),
            rule: rule_description(rule),
            seed: rule.seed,
            exactness: Exactness::Observed,
        },
        norm_bound_defect: 0.0,
    })
}

/// The symbol moved by h: z -> phi(h^{-1} z).
pub fn translated_symbol(symbol: &SymbolSpec, h: &GroupElement) -> Result<SymbolSpec> {
    let domain = symbol.domain;
    if domain.rows() != h.n || domain.cols() != h.m {
        return Err(CoreError::ShapeMismatch(
            "group does not act on this domain shape".into(),
        ));
    }
    let h_inv = h.inverse();
    let inner = symbol.clone();
    let eval = Arc::new(move |p: &DomainPoint| -> Complex64 {
        match mobius_apply(&h_inv, &domain, p) {
            Ok(w) => match inner.eval(&w) {
                Ok(v) => v,
                Err(_) => Complex64::new(f64::NAN, 0.0),
            },
            Err(_) => Complex64::new(f64::NAN, 0.0),
        }
    });
    Ok(SymbolSpec::oracle(
        &domain,
        eval,
        InvarianceClass::None,
        format!("translate[{}]", symbol.describe()),
        symbol.is_real(),
        symbol.esssup_bound,
    ))
}

/// || pi(h) T_phi - T_{phi o h^{-1}} pi(h) ||_2: zero in exact arithmetic
/// for every h, by the change-of-variables identity for Toeplitz symbols.
pub fn intertwine_defect(
    basis: &BasisHandle,
    h: &GroupElement,
    symbol: &SymbolSpec,
    rule: &QuadratureRule,
) -> Result<f64> {
    let pi_h = pi_lambda_matrix(basis, h, Some(rule), false)?;
    let t_phi = toeplitz_matrix(basis, symbol, rule)?;
    let moved = translated_symbol(symbol, h)?;
    let t_moved = toeplitz_matrix(basis, &moved, rule)?;
    let defect = &pi_h.entries * &t_phi.entries - &t_moved.entries * &pi_h.entries;
    Ok(spectral_norm(&defect))
}
