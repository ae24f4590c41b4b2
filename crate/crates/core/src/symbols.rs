//! Bounded symbol families with declared invariance groups.
//!
//! Each variant composes a one-dimensional profile with an invariant
//! coordinate of its group: the operator-norm radius for the maximal
//! compact group, singular-value traces for K on matrix balls, modulus
//! monomials for the torus, the arc and horocycle coordinates of the two
//! nonconjugate one-parameter disk subgroups, and the real-form coordinate
//! on balls. Unbounded raw coordinates are composed with arctan so every
//! symbol stays essentially bounded.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::domains::{DomainDescriptor, DomainPoint};
use crate::error::CoreError;
use crate::Result;

/// One-dimensional real profile applied to an invariant coordinate.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    /// Coefficients lowest order first.
    Poly { coeffs: Vec<f64> },
    Cos { freq: f64 },
    Sin { freq: f64 },
    Exp { scale: f64 },
    Atan,
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Poly { coeffs } => {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
            Profile::Cos { freq } => (freq * x).cos(),
            Profile::Sin { freq } => (freq * x).sin(),
            Profile::Exp { scale } => (scale * x).exp(),
            Profile::Atan => x.atan(),
        }
    }

    /// Upper bound of |profile| over [a, b]; polynomials are bounded by
    /// dense sampling with headroom, the rest in closed form.
    fn bound_on(&self, a: f64, b: f64) -> f64 {
        match self {
            Profile::Poly { coeffs } => {
                if coeffs.is_empty() {
                    return 0.0;
                }
                let steps = 2000;
                let mut m: f64 = 0.0;
                for i in 0..=steps {
                    let x = a + (b - a) * i as f64 / steps as f64;
                    m = m.max(self.eval(x).abs());
                }
                m * 1.05
            }
            Profile::Cos { .. } | Profile::Sin { .. } => 1.0,
            Profile::Exp { scale } => (scale * a).exp().max((scale * b).exp()),
            Profile::Atan => a.atan().abs().max(b.atan().abs()),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Poly { coeffs } => write!(f, "poly{coeffs:?}"),
            Profile::Cos { freq } => write!(f, "cos({freq}*x)"),
            Profile::Sin { freq } => write!(f, "sin({freq}*x)"),
            Profile::Exp { scale } => write!(f, "exp({scale}*x)"),
            Profile::Atan => write!(f, "atan(x)"),
        }
    }
}

/// Group a symbol is constant under, declared per variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvarianceClass {
    None,
    MaximalCompact,
    Torus,
    Rotation,
    HyperbolicAxis,
    ParabolicHorocycle,
    RealForm,
}

/// Extra unimodular factor in a torus-invariant monomial: the lowest-order
/// torus-neutral product that is not a modulus, z11 z22 conj(z12) conj(z21)
/// on a 2 x 2 domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossFactor {
    One,
    Re,
    Im,
}

/// One term of a torus-invariant polynomial symbol.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TorusTerm {
    pub coeff: f64,
    /// Row-major exponents of the squared moduli |z_jk|^2.
    pub powers: Vec<u32>,
    pub cross: CrossFactor,
}

/// Symbol variants; all but Oracle are real-valued by construction.
#[derive(Clone)]
pub enum SymbolKind {
    /// Profile of the operator-norm radius, constant on K-orbits.
    Radial { profile: Profile },
    /// Profile of w1 tr(ZZ*) + w2 tr((ZZ*)^2), constant on K-orbits.
    KInvariant { weights: (f64, f64), profile: Profile },
    /// Real polynomial in moduli |z_jk|^2 and the neutral quartic.
    TorusInvariant { terms: Vec<TorusTerm> },
    /// Disk only: profile of u(z) = arg((1+z)/(1-z)), constant on the
    /// circle arcs joining -1 and 1.
    HyperbolicArc { profile: Profile },
    /// Disk only: profile of atan(Re((1+z)/(1-z))), constant on the
    /// horocycles tangent at 1.
    Parabolic { profile: Profile },
    /// Ball only: profile of atan(|1 - z.z| / (1 - |z|^2)), constant on
    /// real-form orbits.
    RealFormInvariant { profile: Profile },
    /// Arbitrary evaluator with declared invariance; bound supplied by the
    /// caller and trusted.
    Oracle {
        eval: Arc<dyn Fn(&DomainPoint) -> Complex64 + Send + Sync>,
        invariance: InvarianceClass,
        label: String,
        real_valued: bool,
    },
}

impl fmt::Debug for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolKind::Radial { profile } => write!(f, "Radial({profile})"),
            SymbolKind::KInvariant { weights, profile } => {
                write!(f, "KInvariant({weights:?}, {profile})")
            }
            SymbolKind::TorusInvariant { terms } => write!(f, "TorusInvariant({terms:?})"),
            SymbolKind::HyperbolicArc { profile } => write!(f, "HyperbolicArc({profile})"),
            SymbolKind::Parabolic { profile } => write!(f, "Parabolic({profile})"),
            SymbolKind::RealFormInvariant { profile } => write!(f, "RealFormInvariant({profile})"),
            SymbolKind::Oracle { label, invariance, .. } => {
                write!(f, "Oracle({label}, {invariance:?})")
            }
        }
    }
}

/// A validated symbol on one domain, with its essential-sup bound.
#[derive(Clone, Debug)]
pub struct SymbolSpec {
    pub kind: SymbolKind,
    pub domain: DomainDescriptor,
    pub esssup_bound: f64,
}

impl SymbolSpec {
    /// Validates kind/domain compatibility and computes the bound.
    pub fn new(kind: SymbolKind, domain: &DomainDescriptor) -> Result<Self> {
        let is_disk = domain.dim == 1;
        let bound = match &kind {
            SymbolKind::Radial { profile } => profile.bound_on(0.0, 1.0),
            SymbolKind::KInvariant { weights, profile } => {
                let r = domain.rank as f64;
                let (w1, w2) = *weights;
                let lo = (w1 * r).min(0.0) + (w2 * r).min(0.0);
                let hi = (w1 * r).max(0.0) + (w2 * r).max(0.0);
                profile.bound_on(lo, hi)
            }
            SymbolKind::TorusInvariant { terms } => {
                let entries = domain.rows() * domain.cols();
                for t in terms {
                    if t.powers.len() != entries {
                        return Err(CoreError::ShapeMismatch(format!(
                            "torus term wants {entries} exponents, got {}",
                            t.powers.len()
                        )));
                    }
                    if t.cross != CrossFactor::One
                        && (domain.rows() != 2 || domain.cols() != 2)
                    {
                        return Err(CoreError::InvalidDomain(
                            "cross factor needs a 2x2 matrix ball".into(),
                        ));
                    }
                }
                terms.iter().map(|t| t.coeff.abs()).sum()
            }
            SymbolKind::HyperbolicArc { profile } => {
                if !is_disk {
                    return Err(CoreError::InvalidDomain(
                        "arc coordinate exists on the disk only".into(),
                    ));
                }
                profile.bound_on(-FRAC_PI_2, FRAC_PI_2)
            }
            SymbolKind::Parabolic { profile } => {
                if !is_disk {
                    return Err(CoreError::InvalidDomain(
                        "horocycle coordinate exists on the disk only".into(),
                    ));
                }
                profile.bound_on(0.0, FRAC_PI_2)
            }
            SymbolKind::RealFormInvariant { profile } => {
                if domain.cols() != 1 {
                    return Err(CoreError::InvalidDomain(
                        "real-form coordinate exists on unit balls only".into(),
                    ));
                }
                profile.bound_on(FRAC_PI_4, FRAC_PI_2)
            }
            SymbolKind::Oracle { .. } => {
                return Err(CoreError::InvalidDomain(
                    "oracle symbols need an explicit bound; use SymbolSpec::oracle".into(),
                ))
            }
        };
        Ok(Self {
            kind,
            domain: *domain,
            esssup_bound: bound,
        })
    }

    /// Wraps an arbitrary evaluator; the stated bound is trusted.
    pub fn oracle(
        domain: &DomainDescriptor,
        eval: Arc<dyn Fn(&DomainPoint) -> Complex64 + Send + Sync>,
        invariance: InvarianceClass,
        label: impl Into<String>,
        real_valued: bool,
        esssup_bound: f64,
    ) -> Self {
        Self {
            kind: SymbolKind::Oracle {
                eval,
                invariance,
                label: label.into(),
                real_valued,
            },
            domain: *domain,
            esssup_bound,
        }
    }

    pub fn invariance(&self) -> InvarianceClass {
        match &self.kind {
            SymbolKind::Radial { .. } | SymbolKind::KInvariant { .. } => {
                InvarianceClass::MaximalCompact
            }
            SymbolKind::TorusInvariant { .. } => InvarianceClass::Torus,
            SymbolKind::HyperbolicArc { .. } => InvarianceClass::HyperbolicAxis,
            SymbolKind::Parabolic { .. } => InvarianceClass::ParabolicHorocycle,
            SymbolKind::RealFormInvariant { .. } => InvarianceClass::RealForm,
            SymbolKind::Oracle { invariance, .. } => *invariance,
        }
    }

    pub fn is_real(&self) -> bool {
        match &self.kind {
            SymbolKind::Oracle { real_valued, .. } => *real_valued,
            _ => true,
        }
    }

    /// Whether the torus-weight selection rule zeroes cross-weight Toeplitz
    /// entries for this symbol: any torus-invariant class, or rotation
    /// invariance on the disk where the full torus is the rotation circle.
    pub fn zeroes_cross_weight(&self) -> bool {
        match self.invariance() {
            InvarianceClass::Torus | InvarianceClass::MaximalCompact => true,
            InvarianceClass::Rotation => self.domain.dim == 1,
            _ => false,
        }
    }

    /// Stable description for reports and provenance records.
    pub fn describe(&self) -> String {
        match &self.kind {
            SymbolKind::Radial { profile } => format!("radial[{profile}]"),
            SymbolKind::KInvariant { weights, profile } => format!(
                "k_invariant[w=({},{}), {profile}]",
                weights.0, weights.1
            ),
            SymbolKind::TorusInvariant { terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{}*m{:?}{:?}", t.coeff, t.powers, t.cross))
                    .collect();
                format!("torus_invariant[{}]", parts.join(" + "))
            }
            SymbolKind::HyperbolicArc { profile } => format!("hyperbolic_arc[{profile}]"),
            SymbolKind::Parabolic { profile } => format!("parabolic[{profile}]"),
            SymbolKind::RealFormInvariant { profile } => format!("real_form[{profile}]"),
            SymbolKind::Oracle { label, .. } => format!("oracle[{label}]"),
        }
    }

    /// Value at an interior point; membership is the caller's problem in
    /// hot loops (see `evaluator`), checked here for the public op.
    pub fn eval(&self, point: &DomainPoint) -> Result<Complex64> {
        if !self.domain.contains(point)? {
            return Err(CoreError::OutsideDomain);
        }
        Ok(self.eval_unchecked(point))
    }

    /// Unchecked evaluator borrowed for integration loops.
    pub fn evaluator(&self) -> impl Fn(&DomainPoint) -> Complex64 + '_ {
        move |p| self.eval_unchecked(p)
    }

    fn eval_unchecked(&self, point: &DomainPoint) -> Complex64 {
        let re = |x: f64| Complex64::new(x, 0.0);
        match &self.kind {
            SymbolKind::Radial { profile } => {
                let r = match self.domain.op_norm(point) {
                    Ok(r) => r,
                    Err(_) => return Complex64::new(f64::NAN, 0.0),
                };
                re(profile.eval(r))
            }
            SymbolKind::KInvariant { weights, profile } => {
                let (t1, t2) = singular_traces(point);
                re(profile.eval(weights.0 * t1 + weights.1 * t2))
            }
            SymbolKind::TorusInvariant { terms } => {
                let z = &point.value;
                let mut acc = 0.0;
                for t in terms {
                    let mut v = t.coeff;
                    for (k, &p) in t.powers.iter().enumerate() {
                        if p > 0 {
                            let (r, c) = (k / z.ncols(), k % z.ncols());
                            v *= z[(r, c)].norm_sqr().powi(p as i32);
                        }
                    }
                    match t.cross {
                        CrossFactor::One => {}
                        CrossFactor::Re | CrossFactor::Im => {
                            let q = z[(0, 0)] * z[(1, 1)]
                                * z[(0, 1)].conj()
                                * z[(1, 0)].conj();
                            v *= if t.cross == CrossFactor::Re { q.re } else { q.im };
                        }
                    }
                    acc += v;
                }
                re(acc)
            }
            SymbolKind::HyperbolicArc { profile } => {
                let u = arc_coordinate(point.value[(0, 0)]);
                re(profile.eval(u))
            }
            SymbolKind::Parabolic { profile } => {
                let w = horocycle_coordinate(point.value[(0, 0)]);
                re(profile.eval(w))
            }
            SymbolKind::RealFormInvariant { profile } => {
                let y = real_form_coordinate(point);
                re(profile.eval(y))
            }
            SymbolKind::Oracle { eval, .. } => eval(point),
        }
    }
}

/// (tr(ZZ*), tr((ZZ*)^2)); 2 x 2 in closed form, general via the smaller
/// Gram side.
pub fn singular_traces(point: &DomainPoint) -> (f64, f64) {
    let z = &point.value;
    let t1 = z.norm_squared();
    let (r, c) = (z.nrows(), z.ncols());
    if r == 1 || c == 1 {
        return (t1, t1 * t1);
    }
    if r == 2 && c == 2 {
        let det = z[(0, 0)] * z[(1, 1)] - z[(0, 1)] * z[(1, 0)];
        return (t1, t1 * t1 - 2.0 * det.norm_sqr());
    }
    let gram = if c <= r { z.adjoint() * z } else { z * z.adjoint() };
    (t1, gram.norm_squared())
}

/// u(z) = arg((1+z)/(1-z)), the coordinate constant on circle arcs through
/// -1 and 1; takes values in (-pi/2, pi/2) on the disk.
pub fn arc_coordinate(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    ((one + z) / (one - z)).arg()
}

/// atan(Re((1+z)/(1-z))), the bounded coordinate constant on horocycles
/// tangent at 1; takes values in (0, pi/2) on the disk.
pub fn horocycle_coordinate(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    ((one + z) / (one - z)).re.atan()
}

/// atan(|1 - z.z| / (1 - |z|^2)) with the bilinear dot z.z = sum z_j^2;
/// constant on the orbits of the real form of the ball's isometry group,
/// values in [pi/4, pi/2).
pub fn real_form_coordinate(point: &DomainPoint) -> f64 {
    let z = &point.value;
    let dot: Complex64 = (0..z.nrows()).map(|j| z[(j, 0)] * z[(j, 0)]).sum();
    let num = (Complex64::new(1.0, 0.0) - dot).norm();
    let den = 1.0 - z.norm_squared();
    if den <= 0.0 {
        return FRAC_PI_2;
    }
    (num / den).atan()
}
