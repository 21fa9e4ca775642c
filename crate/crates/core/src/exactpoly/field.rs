//! Coefficient fields: the rationals and prime fields of characteristic >= 5.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PolyError;

/// Largest admissible prime modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

/// The field all coefficients of a computation live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { p: u64 },
}

impl FieldSpec {
    /// Validated prime field. Characteristics 2 and 3 are rejected because the
    /// fibre weights 2 and 3 must be invertible.
    pub fn prime(p: u64) -> Result<Self, PolyError> {
        if p < 5 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(PolyError::BadModulus(p));
        }
        Ok(FieldSpec::PrimeField { p })
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField { p } => Some(p),
        }
    }

    /// Re-validates a deserialized spec.
    pub fn checked(self) -> Result<Self, PolyError> {
        match self {
            FieldSpec::Rationals => Ok(self),
            FieldSpec::PrimeField { p } => FieldSpec::prime(p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField { p } => Scalar::Residue { value: n.rem_euclid(p as i64) as u64, modulus: p },
        }
    }

    pub fn residue(&self, value: u64) -> Scalar {
        match *self {
            FieldSpec::Rationals => self.int(value as i64),
            FieldSpec::PrimeField { p } => Scalar::Residue { value: value % p, modulus: p },
        }
    }

    /// Maps an exact rational into this field; fails when the denominator
    /// vanishes modulo `p`.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, PolyError> {
        match *self {
            FieldSpec::Rationals => Ok(Scalar::Rational(r.clone())),
            FieldSpec::PrimeField { p } => {
                let pb = BigInt::from(p);
                let num = r.numer().mod_floor(&pb).to_u64().unwrap();
                let den = r.denom().mod_floor(&pb).to_u64().unwrap();
                if den == 0 {
                    return Err(PolyError::DenominatorVanishes { p });
                }
                let inv = Scalar::Residue { value: den, modulus: p }.inv().unwrap();
                Ok(&Scalar::Residue { value: num, modulus: p } * &inv)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "qq"),
            FieldSpec::PrimeField { p } => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = PolyError;

    /// Accepts `qq` or `fp:P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "qq" {
            return Ok(FieldSpec::Rationals);
        }
        match s.strip_prefix("fp:") {
            Some(rest) => {
                let p: u64 = rest.parse().map_err(|_| PolyError::BadFieldSpec(s.to_string()))?;
                FieldSpec::prime(p)
            }
            None => Err(PolyError::BadFieldSpec(s.to_string())),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`FieldSpec`]. Residues carry their modulus so that
/// arithmetic needs no external context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::PrimeField { p: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus }
            }
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign used when printing: rationals by sign, residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Residue { .. } => false,
        }
    }

    /// Residue value; panics on rationals.
    pub fn residue_value(&self) -> u64 {
        match self {
            Scalar::Residue { value, .. } => *value,
            Scalar::Rational(_) => panic!("residue_value called on a rational scalar"),
        }
    }

    fn check_same(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "arithmetic across different fields");
    }
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: (a + b) % modulus, modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: a * b % modulus, modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_composite_moduli() {
        assert!(FieldSpec::prime(2).is_err());
        assert!(FieldSpec::prime(3).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1 << 31).is_err());
        assert!(FieldSpec::prime(5).is_ok());
        assert!(FieldSpec::prime(2147483647).is_ok());
    }

    #[test]
    fn field_spec_strings() {
        assert_eq!("qq".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("fp:101".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField { p: 101 });
        assert!("fp:3".parse::<FieldSpec>().is_err());
        assert!("zz".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::PrimeField { p: 11 }.to_string(), "fp:11");
    }

    #[test]
    fn residue_inverse_and_rational_reduction() {
        let f = FieldSpec::prime(7).unwrap();
        for a in 1..7 {
            let x = f.int(a);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), f.int(4));
        let seventh = BigRational::new(1.into(), 7.into());
        assert!(f.from_rational(&seventh).is_err());
        assert_eq!(f.int(-1), f.int(6));
    }
}
