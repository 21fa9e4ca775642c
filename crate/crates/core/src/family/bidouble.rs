//! Branch data of the bidouble covers of Hirzebruch surfaces and the standard
//! invariant formulas for smooth bidouble covers.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

use super::FamilyError;

/// `a Γ∞ + b Γ` on `F_r` (on `F_0` read `a Γ1 + b Γ2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    pub a: i64,
    pub b: i64,
}

impl LatticeClass {
    pub fn new(a: i64, b: i64) -> Self {
        LatticeClass { a, b }
    }

    /// Intersection product on `F_r`: `Γ∞^2 = -r`, `Γ∞ Γ = 1`, `Γ^2 = 0`.
    pub fn dot(&self, other: &LatticeClass, r: u32) -> i64 {
        -(r as i64) * self.a * other.a + self.a * other.b + self.b * other.a
    }

    pub fn half(&self) -> Option<LatticeClass> {
        (self.a % 2 == 0 && self.b % 2 == 0).then(|| LatticeClass::new(self.a / 2, self.b / 2))
    }
}

impl Add for LatticeClass {
    type Output = LatticeClass;
    fn add(self, o: LatticeClass) -> LatticeClass {
        LatticeClass::new(self.a + o.a, self.b + o.b)
    }
}

impl Mul<LatticeClass> for i64 {
    type Output = LatticeClass;
    fn mul(self, c: LatticeClass) -> LatticeClass {
        LatticeClass::new(self * c.a, self * c.b)
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl Serialize for LatticeClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Where a row of branch data comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchSource {
    /// Quotient of `X` by `(x0, z) -> (±x0, ±z)`, for `theta <= 4`.
    QuotientTable,
    /// The explicit triple on `F_1` for `theta = 5`.
    ExplicitTriple,
    /// A triple on `P^1 x P^1` completing `K^2 = 4 p_g`; not printed as a
    /// table row in the source, reconstructed here.
    ExternalSourceRow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchData {
    /// `r` in `F_r`.
    pub base: u32,
    pub divisors: [LatticeClass; 3],
    pub source: BranchSource,
}

/// Branch divisors `D1, D2, D3` for given `theta` and `p_g`.
pub fn bidouble_branch_data(theta: u32, p_g: u32) -> Result<BranchData, FamilyError> {
    let p = p_g as i64;
    let l = LatticeClass::new;
    let (base, d, source) = match theta {
        0 => (2, [l(1, 2 * p), l(3, 6), l(1, 0)], BranchSource::QuotientTable),
        1 => (1, [l(1, 2 * p), l(3, 4), l(1, 0)], BranchSource::QuotientTable),
        2 => (0, [l(1, 2 * p), l(3, 2), l(1, 0)], BranchSource::QuotientTable),
        3 => (1, [l(1, 2 * p + 1), l(3, 3), l(1, 1)], BranchSource::QuotientTable),
        4 => (2, [l(1, 2 * p + 2), l(3, 4), l(1, 2)], BranchSource::QuotientTable),
        5 => (1, [l(1, 2 * p + 2), l(3, 2), l(1, 2)], BranchSource::ExplicitTriple),
        6 => (0, [l(1, 2 * p + 2), l(3, 0), l(1, 2)], BranchSource::ExternalSourceRow),
        t => return Err(crate::gring::GringError::ThetaOutOfRange(t as i64).into()),
    };
    Ok(BranchData { base, divisors: d, source })
}

/// `(K^2, chi)` of the smooth bidouble cover with the given branch data:
/// `K^2 = (2 K_Y + D)^2` and `chi = 4 chi(O_Y) + 1/2 sum L_i (L_i + K_Y)`
/// with `2 L_i = D_j + D_k`.
pub fn bidouble_invariants(data: &BranchData) -> Result<(i64, i64), FamilyError> {
    let r = data.base;
    if r > 2 {
        return Err(FamilyError::BadBase(r));
    }
    let k_y = LatticeClass::new(-2, -(r as i64) - 2);
    let [d1, d2, d3] = data.divisors;
    let d = d1 + d2 + d3;
    let c = 2 * k_y + d;
    let k2 = c.dot(&c, r);
    let pairs = [(1, 2), (0, 2), (0, 1)];
    let mut twice_sum = 0;
    for (j, k) in pairs {
        let sum = data.divisors[j] + data.divisors[k];
        let li = sum.half().ok_or(FamilyError::OddPair { j: j + 1, k: k + 1, sum })?;
        twice_sum += li.dot(&(li + k_y), r);
    }
    debug_assert!(twice_sum % 2 == 0);
    // chi(O_Y) = 1 for a rational surface.
    Ok((k2, 4 + twice_sum / 2))
}
