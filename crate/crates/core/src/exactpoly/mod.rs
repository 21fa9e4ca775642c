//! Exact scalar and binary-form arithmetic over the rationals and prime fields.
//!
//! A binary form is a homogeneous polynomial in `(t0, t1)`, the coordinates of
//! the base `P^1`. Every coefficient slot of the surface equations, of the
//! multiplication matrices and of the relations between them is one of these.

mod binform;
mod field;
mod multiform;
pub mod parse;

pub use binform::{BinForm, P1Point};
pub use field::{is_prime, FieldSpec, Scalar, MAX_MODULUS};
pub use multiform::MultiForm;
pub use parse::ParseError;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("modulus {0} rejected: need a prime 5 <= p < 2^31")]
    BadModulus(u64),
    #[error("unrecognised field `{0}` (expected `qq` or `fp:P`)")]
    BadFieldSpec(String),
    #[error("denominator vanishes modulo {p}")]
    DenominatorVanishes { p: u64 },
    #[error("mixed fields: {left} and {right}")]
    MixedFields { left: FieldSpec, right: FieldSpec },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("a form of degree {degree} needs {} coefficients, got {got}", degree + 1)]
    CoefficientCount { degree: u32, got: usize },
    #[error("gcd of two zero forms is undefined")]
    BothZero,
    #[error("division by the zero form")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("root finding is only supported over prime fields")]
    RootsOverRationals,
    #[error("the zero form has no finite root multiset")]
    ZeroForm,
    #[error("chart reduction needs a modulus coprime to t1, got {0}")]
    ModulusMeetsInfinity(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
