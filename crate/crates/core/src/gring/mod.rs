//! The bigraded section ring of the weighted projective bundle `P` over `P^1`.
//!
//! Fibre coordinates `x0, x1, y, z` have weights `1, 1, 2, 3` and twists
//! `1, p_g + 1, 2 p_g + theta, 3 p_g + theta`. A section of `O_P(d H + m F)` is
//! a sum of fibre monomials `M` of weight `d` whose coefficient is a binary
//! form of degree `m + a(M)`, where `a(M)` is the twist sum of `M`.

mod io;
mod section;

pub use io::EquationFile;
pub use section::{GradedSection, ReductionOrder};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::parse::{parse_monomial, ParseError};
use crate::exactpoly::PolyError;

pub const FIBRE_VARS: [&str; 4] = ["x0", "x1", "y", "z"];
pub const WEIGHTS: [u32; 4] = [1, 1, 2, 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GringError {
    #[error("p_g >= 2 required, got {0}")]
    GenusTooSmall(i64),
    #[error("theta must lie in 0..=6, got {0}")]
    ThetaOutOfRange(i64),
    #[error("monomial {monomial} has fibre weight {found}, section has weight {expected}")]
    WeightMismatch { monomial: FiberMonomial, expected: u32, found: u32 },
    #[error("coefficient of {monomial} has degree {found}, expected {expected} (= m + twist sum)")]
    DegreeMismatch { monomial: FiberMonomial, expected: i64, found: u32 },
    #[error("bidegree mismatch: {left:?} vs {right:?}")]
    BidegreeMismatch { left: (u32, i64), right: (u32, i64) },
    #[error("sections over different bundles: {left} vs {right}")]
    BundleMismatch { left: BundleData, right: BundleData },
    #[error("relation is not monic in {0}")]
    NotMonic(&'static str),
    #[error("relation has a tail term {0} that its leading monomial does not dominate")]
    BadTail(FiberMonomial),
    #[error("{slot}: {source}")]
    Slot { slot: String, source: Box<GringError> },
    #[error("parse error in {slot}: {source}")]
    Parse { slot: String, source: ParseError },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The pair `(p_g, theta)` and everything it determines about `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleData {
    p_g: u32,
    theta: u32,
}

impl BundleData {
    pub fn new(p_g: i64, theta: i64) -> Result<Self, GringError> {
        if p_g < 2 {
            return Err(GringError::GenusTooSmall(p_g));
        }
        if !(0..=6).contains(&theta) {
            return Err(GringError::ThetaOutOfRange(theta));
        }
        Ok(BundleData { p_g: p_g as u32, theta: theta as u32 })
    }

    pub fn p_g(&self) -> u32 {
        self.p_g
    }

    pub fn theta(&self) -> u32 {
        self.theta
    }

    pub fn chi(&self) -> i64 {
        self.p_g as i64 + 1
    }

    pub fn k2(&self) -> i64 {
        4 * self.p_g as i64 - 6 + self.theta as i64
    }

    /// Twists `a_i` of the summands of `V` carrying `x0, x1, y, z`.
    pub fn twists(&self) -> [i64; 4] {
        let (p, t) = (self.p_g as i64, self.theta as i64);
        [1, p + 1, 2 * p + t, 3 * p + t]
    }

    /// `m` such that the quadric lives in `|2H + mF|`.
    pub fn quadric_twist(&self) -> i64 {
        -2
    }

    /// `m` such that the sextic lives in `|6H + mF|`.
    pub fn sextic_twist(&self) -> i64 {
        -(6 * self.p_g as i64 + 2 * self.theta as i64)
    }
}

impl fmt::Display for BundleData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p_g={}, theta={})", self.p_g, self.theta)
    }
}

/// Exponents `(i, j, k, l)` of `x0^i x1^j y^k z^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberMonomial(pub [u32; 4]);

impl FiberMonomial {
    pub const ONE: FiberMonomial = FiberMonomial([0; 4]);

    pub fn new(i: u32, j: u32, k: u32, l: u32) -> Self {
        FiberMonomial([i, j, k, l])
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().zip(WEIGHTS).map(|(e, w)| e * w).sum()
    }

    pub fn twist_sum(&self, bundle: &BundleData) -> i64 {
        self.0.iter().zip(bundle.twists()).map(|(&e, a)| e as i64 * a).sum()
    }

    /// All monomials of the given fibre weight, in increasing `(l, i, k, j)`.
    pub fn of_weight(d: u32) -> Vec<FiberMonomial> {
        let mut out = Vec::new();
        for l in 0..=d / 3 {
            for i in 0..=d - 3 * l {
                let rest = d - 3 * l - i;
                for k in 0..=rest / 2 {
                    out.push(FiberMonomial::new(i, rest - 2 * k, k, l));
                }
            }
        }
        out.sort_by_key(|m| m.order_key());
        out
    }

    /// Key of the fixed reduction order: lexicographic in `(l, i, k, j)`.
    pub fn order_key(&self) -> [u32; 4] {
        let [i, j, k, l] = self.0;
        [l, i, k, j]
    }

    pub fn divides(&self, other: &FiberMonomial) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| *a <= b)
    }

    pub fn checked_div(&self, other: &FiberMonomial) -> Option<FiberMonomial> {
        other.divides(self).then(|| FiberMonomial(std::array::from_fn(|k| self.0[k] - other.0[k])))
    }

    pub fn mul(&self, other: &FiberMonomial) -> FiberMonomial {
        FiberMonomial(std::array::from_fn(|k| self.0[k] + other.0[k]))
    }
}

impl fmt::Display for FiberMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..4)
            .filter(|&k| self.0[k] > 0)
            .map(|k| match self.0[k] {
                1 => FIBRE_VARS[k].to_string(),
                e => format!("{}^{}", FIBRE_VARS[k], e),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl FromStr for FiberMonomial {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let e = parse_monomial(s, &FIBRE_VARS)?;
        Ok(FiberMonomial([e[0], e[1], e[2], e[3]]))
    }
}
