//! Intersection numbers on the weighted projective bundle `P` over `P^1` and
//! the invariants of the complete intersection `X = Q ∩ G` inside it.
//!
//! The Chow ring is generated by `H` (the tautological class) and `F` (a
//! fibre) subject to `F^2 = 0`, `H^3 F = 1 / prod w_i` and
//! `H^4 = (sum a_i / w_i) / prod w_i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gring::{BundleData, GringError, WEIGHTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error(transparent)]
    Params(#[from] GringError),
    #[error("{what} is not an integer: {value}")]
    NotIntegral { what: &'static str, value: String },
    #[error("{what}: intersection theory gives {computed}, closed form gives {closed}")]
    ClosedFormMismatch { what: &'static str, computed: i64, closed: i64 },
}

/// The class `h H + f F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub h: i64,
    pub f: i64,
}

impl DivisorClass {
    pub const H: DivisorClass = DivisorClass { h: 1, f: 0 };
    pub const F: DivisorClass = DivisorClass { h: 0, f: 1 };

    pub fn new(h: i64, f: i64) -> Self {
        DivisorClass { h, f }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.h + o.h, self.f + o.f)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.h - o.h, self.f - o.f)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.h, -self.f)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, c: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * c.h, self * c.f)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.h, self.f) {
            (0, 0) => write!(f, "0"),
            (h, 0) => write!(f, "{}", term(h, "H")),
            (0, b) => write!(f, "{}", term(b, "F")),
            (h, b) => {
                let sign = if b < 0 { '-' } else { '+' };
                write!(f, "{} {} {}", term(h, "H"), sign, term(b.abs(), "F"))
            }
        }
    }
}

fn term(c: i64, sym: &str) -> String {
    match c {
        1 => sym.to_string(),
        -1 => format!("-{sym}"),
        c => format!("{c}{sym}"),
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The two primitive intersection numbers of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionContext {
    pub bundle: BundleData,
    /// `H^4`.
    pub h4: BigRational,
    /// `H^3 F`.
    pub h3f: BigRational,
}

impl IntersectionContext {
    pub fn new(bundle: BundleData) -> Self {
        let wprod: i64 = WEIGHTS.iter().map(|&w| w as i64).product();
        let sum =
            bundle.twists().iter().zip(WEIGHTS).fold(BigRational::zero(), |acc, (&a, w)| acc + ratio(a, w as i64));
        IntersectionContext { bundle, h4: sum / BigRational::from_integer(BigInt::from(wprod)), h3f: ratio(1, wprod) }
    }

    /// Degree of the product of four divisor classes, expanded multilinearly
    /// with `F^2 = 0`.
    pub fn top_intersection(&self, classes: [DivisorClass; 4]) -> BigRational {
        let hprod: i64 = classes.iter().map(|c| c.h).product();
        let mixed: i64 =
            (0..4).map(|i| classes[i].f * (0..4).filter(|&j| j != i).map(|j| classes[j].h).product::<i64>()).sum();
        &self.h4 * BigRational::from_integer(hprod.into()) + &self.h3f * BigRational::from_integer(mixed.into())
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Classes of the ambient relative canonical divisor and of the two
/// equations for given `(p_g, theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalClasses {
    #[serde(rename = "Q")]
    pub quadric: DivisorClass,
    #[serde(rename = "G")]
    pub sextic: DivisorClass,
    /// `K_{P|P^1}`.
    #[serde(rename = "K_rel")]
    pub k_rel_ambient: DivisorClass,
    /// `K_X`, restricted from the ambient class.
    #[serde(rename = "K")]
    pub k_surface: DivisorClass,
}

impl CanonicalClasses {
    pub fn new(bundle: BundleData) -> Self {
        let (p, t) = (bundle.p_g() as i64, bundle.theta() as i64);
        // K_{P|P^1} = -(sum w_i) H + (sum a_i) F.
        let wsum: i64 = WEIGHTS.iter().map(|&w| w as i64).sum();
        let asum: i64 = bundle.twists().iter().sum();
        let k_rel = DivisorClass::new(-wsum, asum);
        debug_assert_eq!(k_rel, DivisorClass::new(-7, 6 * p + 2 * t + 2));
        CanonicalClasses {
            quadric: DivisorClass::new(2, bundle.quadric_twist()),
            sextic: DivisorClass::new(6, bundle.sextic_twist()),
            k_rel_ambient: k_rel,
            k_surface: DivisorClass::new(1, -2),
        }
    }
}

/// `K_{P|P^1} + [Q] + [G]`, which must equal `H`.
pub fn adjunction_check(bundle: BundleData) -> DivisorClass {
    let c = CanonicalClasses::new(bundle);
    let rel = c.k_rel_ambient + c.quadric + c.sextic;
    assert_eq!(rel, DivisorClass::H, "relative adjunction must give H");
    // K_X = K_{X|P^1} + f^* K_{P^1} = H - 2F.
    assert_eq!(rel + (-2) * DivisorClass::F, c.k_surface);
    rel
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub p_g: i64,
    pub theta: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub chi: i64,
    pub q: i64,
}

/// `K^2` by intersection theory, `chi` from the degree of the pushed-forward
/// relative dualising sheaf; both compared against `4 p_g - 6 + theta` and
/// `p_g + 1`.
pub fn surface_invariants(p_g: i64, theta: i64) -> Result<SurfaceInvariants, ChowError> {
    let bundle = BundleData::new(p_g, theta)?;
    let ctx = IntersectionContext::new(bundle);
    let c = CanonicalClasses::new(bundle);
    let k = c.k_surface;
    let k2 = ctx.top_intersection([k, k, c.quadric, c.sextic]);
    let k2 = integral("K^2", &k2)?;
    // f_* omega_{X|P^1} is the span of x0, x1: O(1) + O(p_g + 1).
    let twists = bundle.twists();
    let chi = twists[0] + twists[1] - 1;
    if k2 != bundle.k2() {
        return Err(ChowError::ClosedFormMismatch { what: "K^2", computed: k2, closed: bundle.k2() });
    }
    if chi != bundle.chi() {
        return Err(ChowError::ClosedFormMismatch { what: "chi", computed: chi, closed: bundle.chi() });
    }
    Ok(SurfaceInvariants { p_g, theta, k2, chi, q: 0 })
}

fn integral(what: &'static str, r: &BigRational) -> Result<i64, ChowError> {
    if !r.is_integer() {
        return Err(ChowError::NotIntegral { what, value: r.to_string() });
    }
    r.to_integer().to_i64().ok_or(ChowError::NotIntegral { what, value: r.to_string() })
}

/// CLI-facing report; integers are emitted as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub p_g: String,
    pub theta: String,
    #[serde(rename = "K2")]
    pub k2: String,
    pub chi: String,
    pub q: String,
    pub classes: CanonicalClasses,
    pub adjunction: DivisorClass,
}

pub fn invariants_report(p_g: i64, theta: i64) -> Result<InvariantsReport, ChowError> {
    let inv = surface_invariants(p_g, theta)?;
    let bundle = BundleData::new(p_g, theta)?;
    Ok(InvariantsReport {
        p_g: inv.p_g.to_string(),
        theta: inv.theta.to_string(),
        k2: inv.k2.to_string(),
        chi: inv.chi.to_string(),
        q: inv.q.to_string(),
        classes: CanonicalClasses::new(bundle),
        adjunction: adjunction_check(bundle),
    })
}
