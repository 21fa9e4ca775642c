use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use super::parse::{parse_polynomial, ParseError};
use super::{FieldSpec, PolyError, Scalar};

/// Homogeneous polynomial in `(t0, t1)`.
///
/// `coeffs[i]` is the coefficient of `t0^(d-i) * t1^i`. The zero form has no
/// coefficients and no degree, so it fits any degree slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinForm {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

/// A point of `P^1` over a prime field, normalised to `(a:1)` or `(1:0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct P1Point {
    pub t0: u64,
    pub t1: u64,
}

impl P1Point {
    pub const INFINITY: P1Point = P1Point { t0: 1, t1: 0 };

    pub fn affine(a: u64) -> Self {
        P1Point { t0: a, t1: 1 }
    }

    pub fn is_infinity(&self) -> bool {
        self.t1 == 0
    }

    /// All `p + 1` points, affine ones first.
    pub fn all(p: u64) -> impl Iterator<Item = P1Point> {
        (0..p).map(P1Point::affine).chain(std::iter::once(P1Point::INFINITY))
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.t0, self.t1)
    }
}

impl BinForm {
    pub fn zero(field: FieldSpec) -> Self {
        BinForm { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        Self::normalized(field, vec![c])
    }

    /// `c * t0^e0 * t1^e1`.
    pub fn monomial(c: Scalar, e0: u32, e1: u32) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); (e0 + e1 + 1) as usize];
        coeffs[e1 as usize] = c;
        Self::normalized(field, coeffs)
    }

    pub fn t0(field: FieldSpec) -> Self {
        Self::monomial(field.one(), 1, 0)
    }

    pub fn t1(field: FieldSpec) -> Self {
        Self::monomial(field.one(), 0, 1)
    }

    /// `a * t0 + b * t1`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        let field = a.field();
        Self::normalized(field, vec![a, b])
    }

    /// Builds a form from its `degree + 1` coefficients.
    pub fn from_coeffs(field: FieldSpec, coeffs: Vec<Scalar>) -> Result<Self, PolyError> {
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(PolyError::MixedFields { left: field, right: bad.field() });
        }
        Ok(Self::normalized(field, coeffs))
    }

    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Self {
        Self::normalized(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    fn normalized(field: FieldSpec, coeffs: Vec<Scalar>) -> Self {
        if coeffs.iter().all(Scalar::is_zero) {
            BinForm::zero(field)
        } else {
            BinForm { field, coeffs }
        }
    }

    /// Coefficients drawn uniformly (prime field) or from `[-9, 9]` (rationals).
    pub fn random<R: Rng + ?Sized>(field: FieldSpec, degree: u32, rng: &mut R) -> Self {
        let coeffs = (0..=degree).map(|_| random_scalar(field, rng)).collect();
        Self::normalized(field, coeffs)
    }

    /// Like [`BinForm::random`] but retries until the form is nonzero.
    pub fn random_nonzero<R: Rng + ?Sized>(field: FieldSpec, degree: u32, rng: &mut R) -> Self {
        loop {
            let f = Self::random(field, degree, rng);
            if !f.is_zero() {
                return f;
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() as u32 - 1)
        }
    }

    /// True when this form may sit in a slot of prescribed degree `d`.
    /// The zero form fits every slot, including negative ones.
    pub fn fits_degree(&self, d: i64) -> bool {
        match self.degree() {
            None => true,
            Some(e) => e as i64 == d,
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `t0^(d-e1) t1^e1`.
    pub fn coeff(&self, e1: usize) -> Scalar {
        self.coeffs.get(e1).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// First nonzero coefficient, i.e. the one with the highest power of `t0`.
    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().unwrap()),
        }
    }

    /// Image in `target`: the identity when the fields agree, reduction
    /// modulo `p` from the rationals. Fails if a denominator vanishes mod `p`.
    pub fn change_field(&self, target: FieldSpec) -> Result<BinForm, PolyError> {
        if self.field == target {
            return Ok(self.clone());
        }
        if self.field != FieldSpec::Rationals {
            return Err(PolyError::MixedFields { left: self.field, right: target });
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match c {
                Scalar::Rational(r) => target.from_rational(r),
                Scalar::Residue { .. } => unreachable!("rational form holds a residue"),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::normalized(target, coeffs))
    }

    /// Largest `m` with `t1^m` dividing the form.
    pub fn t1_valuation(&self) -> u32 {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0) as u32
    }

    /// Largest `m` with `t0^m` dividing the form.
    pub fn t0_valuation(&self) -> u32 {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(i) => (self.coeffs.len() - 1 - i) as u32,
            None => 0,
        }
    }

    fn check_field(&self, other: &BinForm) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::MixedFields { left: self.field, right: other.field });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &BinForm) -> Result<BinForm, PolyError> {
        self.check_field(other)?;
        match (self.degree(), other.degree()) {
            (None, _) => Ok(other.clone()),
            (_, None) => Ok(self.clone()),
            (Some(a), Some(b)) if a != b => Err(PolyError::DegreeMismatch { left: a, right: b }),
            _ => {
                let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
                Ok(Self::normalized(self.field, coeffs))
            }
        }
    }

    pub fn checked_sub(&self, other: &BinForm) -> Result<BinForm, PolyError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &BinForm) -> Result<BinForm, PolyError> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(BinForm::zero(self.field));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(Self::normalized(self.field, out))
    }

    pub fn scale(&self, c: &Scalar) -> BinForm {
        Self::normalized(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_int(&self, n: i64) -> BinForm {
        self.scale(&self.field.int(n))
    }

    pub fn pow(&self, e: u32) -> BinForm {
        let mut acc = BinForm::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, t0: &Scalar, t1: &Scalar) -> Scalar {
        let Some(d) = self.degree() else {
            return self.field.zero();
        };
        let mut acc = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &(c * &t0.pow(d - i as u32)) * &t1.pow(i as u32);
            acc = &acc + &term;
        }
        acc
    }

    /// Partial derivative with respect to `t0`.
    pub fn deriv_t0(&self) -> BinForm {
        let Some(d) = self.degree() else {
            return self.clone();
        };
        if d == 0 {
            return BinForm::zero(self.field);
        }
        let coeffs = (0..d as usize).map(|i| self.coeffs[i].clone()).enumerate();
        let coeffs = coeffs.map(|(i, c)| &c * &self.field.int((d as usize - i) as i64)).collect();
        Self::normalized(self.field, coeffs)
    }

    /// Partial derivative with respect to `t1`.
    pub fn deriv_t1(&self) -> BinForm {
        let Some(d) = self.degree() else {
            return self.clone();
        };
        if d == 0 {
            return BinForm::zero(self.field);
        }
        let coeffs = (1..=d as usize).map(|i| &self.coeffs[i] * &self.field.int(i as i64)).collect();
        Self::normalized(self.field, coeffs)
    }

    /// Dehomogenisation at `t1 = 1`, ascending powers of `t0`, trimmed.
    fn chart(&self) -> Vec<Scalar> {
        let mut u: Vec<Scalar> = self.coeffs.iter().rev().cloned().collect();
        trim(&mut u);
        u
    }

    fn from_chart(field: FieldSpec, u: &[Scalar], degree: u32) -> BinForm {
        let d = degree as usize;
        assert!(u.len() <= d + 1, "chart polynomial exceeds target degree");
        let mut coeffs = vec![field.zero(); d + 1];
        for (k, c) in u.iter().enumerate() {
            coeffs[d - k] = c.clone();
        }
        Self::normalized(field, coeffs)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &BinForm) -> Result<BinForm, PolyError> {
        self.check_field(other)?;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(PolyError::BothZero),
            (true, false) => return Ok(other.monic()),
            (false, true) => return Ok(self.monic()),
            _ => {}
        }
        let m = self.t1_valuation().min(other.t1_valuation());
        let g = univ_gcd(self.chart(), other.chart());
        let dg = g.len() as u32 - 1;
        let g = BinForm::from_chart(self.field, &g, dg);
        Ok((&g * &BinForm::monomial(self.field.one(), 0, m)).monic())
    }

    pub fn lcm(&self, other: &BinForm) -> Result<BinForm, PolyError> {
        if self.is_zero() || other.is_zero() {
            self.check_field(other)?;
            return Ok(BinForm::zero(self.field));
        }
        let g = self.gcd(other)?;
        Ok(self.checked_mul(other)?.div_exact(&g)?.monic())
    }

    /// Exact quotient `self / divisor`; fails unless the division is exact.
    pub fn div_exact(&self, divisor: &BinForm) -> Result<BinForm, PolyError> {
        self.check_field(divisor)?;
        let Some(db) = divisor.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let Some(da) = self.degree() else {
            return Ok(BinForm::zero(self.field));
        };
        let not_divisible = || PolyError::NotDivisible { dividend: self.to_string(), divisor: divisor.to_string() };
        if da < db {
            return Err(not_divisible());
        }
        // Power-series division in t1/t0 after stripping the t1-powers.
        let m = divisor.t1_valuation() as usize;
        if (self.t1_valuation() as usize) < m {
            return Err(not_divisible());
        }
        let a = &self.coeffs[m..];
        let b = &divisor.coeffs[m..];
        let lead_inv = b[0].inv().unwrap();
        let dq = (da - db) as usize;
        let mut q: Vec<Scalar> = Vec::with_capacity(dq + 1);
        for i in 0..=dq {
            let mut acc = a[i].clone();
            for (j, qj) in q.iter().enumerate() {
                if let Some(bij) = b.get(i - j) {
                    acc = &acc - &(qj * bij);
                }
            }
            q.push(&acc * &lead_inv);
        }
        let quotient = Self::normalized(self.field, q);
        if &quotient * divisor != *self {
            return Err(not_divisible());
        }
        Ok(quotient)
    }

    pub fn divides(&self, other: &BinForm) -> bool {
        other.div_exact(self).is_ok()
    }

    /// Remainder modulo `modulus` computed in the chart `t1 = 1` and
    /// rehomogenised to the degree of `self`. The modulus must not vanish at
    /// `(1:0)`, so that divisibility of forms and of chart polynomials agree.
    pub fn rem_in_chart(&self, modulus: &BinForm) -> Result<BinForm, PolyError> {
        self.check_field(modulus)?;
        if modulus.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if modulus.t1_valuation() > 0 {
            return Err(PolyError::ModulusMeetsInfinity(modulus.to_string()));
        }
        let Some(d) = self.degree() else {
            return Ok(self.clone());
        };
        let (_, r) = univ_divrem(&self.chart(), &modulus.chart());
        Ok(BinForm::from_chart(self.field, &r, d))
    }

    pub fn is_zero_mod(&self, modulus: &BinForm) -> Result<bool, PolyError> {
        Ok(self.rem_in_chart(modulus)?.is_zero())
    }

    /// Roots in `P^1(F_p)` with multiplicities, affine points first.
    pub fn roots(&self) -> Result<Vec<(P1Point, u32)>, PolyError> {
        let p = self.field.modulus().ok_or(PolyError::RootsOverRationals)?;
        if self.is_zero() {
            return Err(PolyError::ZeroForm);
        }
        let mut out = Vec::new();
        let one = self.field.one();
        for a in 0..p {
            let mut f = self.clone();
            let lin = BinForm::linear(one.clone(), -self.field.residue(a));
            let mut mult = 0;
            while f.degree().unwrap_or(0) > 0 && f.eval(&self.field.residue(a), &one).is_zero() {
                f = f.div_exact(&lin)?;
                mult += 1;
            }
            if mult > 0 {
                out.push((P1Point::affine(a), mult));
            }
        }
        let at_infinity = self.t1_valuation();
        if at_infinity > 0 {
            out.push((P1Point::INFINITY, at_infinity));
        }
        Ok(out)
    }

    /// Number of distinct roots over an algebraic closure, computed as
    /// `deg f - deg gcd(df/dt0, df/dt1)`. Valid in characteristic 0 and in
    /// characteristic `p > deg f`.
    pub fn distinct_root_count(&self) -> Result<u32, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroForm)?;
        if d == 0 {
            return Ok(0);
        }
        let g = self.deriv_t0().gcd(&self.deriv_t1())?;
        Ok(d - g.degree().unwrap())
    }

    /// Parses a form in `t0`, `t1`; see [`crate::exactpoly::parse`] for the grammar.
    pub fn parse(field: FieldSpec, input: &str) -> Result<BinForm, PolyError> {
        let terms = parse_polynomial(input, &["t0", "t1"])?;
        let mut degree: Option<(u32, usize)> = None;
        for t in &terms {
            let d = t.exponents[0] + t.exponents[1];
            match degree {
                None => degree = Some((d, t.offset)),
                Some((d0, _)) if d0 != d => {
                    return Err(ParseError::NotHomogeneous { offset: t.offset, expected: d0, found: d }.into())
                }
                _ => {}
            }
        }
        let Some((d, _)) = degree else {
            return Ok(BinForm::zero(field));
        };
        let mut coeffs = vec![field.zero(); d as usize + 1];
        for t in &terms {
            let c = field.from_rational(&t.coeff)?;
            let i = t.exponents[1] as usize;
            coeffs[i] = &coeffs[i] + &c;
        }
        Ok(Self::normalized(field, coeffs))
    }
}

fn random_scalar<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Scalar {
    match field {
        FieldSpec::Rationals => field.int(rng.gen_range(-9..=9)),
        FieldSpec::PrimeField { p } => field.residue(rng.gen_range(0..p)),
    }
}

fn trim(u: &mut Vec<Scalar>) {
    while u.last().is_some_and(Scalar::is_zero) {
        u.pop();
    }
}

fn univ_divrem(a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].inv().unwrap();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let field = b[0].field();
    let mut q = vec![field.zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = &r[r.len() - 1] * &lead_inv;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&c * bk);
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn univ_gcd(mut a: Vec<Scalar>, mut b: Vec<Scalar>) -> Vec<Scalar> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = univ_divrem(&a, &b);
        a = b;
        b = r;
    }
    let inv = a.last().unwrap().inv().unwrap();
    a.iter().map(|c| c * &inv).collect()
}

impl Serialize for BinForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (e0, e1) = (d - i as u32, i as u32);
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !abs.is_one() || d == 0 {
                factors.push(abs.to_string());
            }
            for (name, e) in [("t0", e0), ("t1", e1)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a BinForm> for &'a BinForm {
    type Output = BinForm;
    fn add(self, rhs: &'a BinForm) -> BinForm {
        self.checked_add(rhs).expect("binary form addition")
    }
}

impl<'a> Sub<&'a BinForm> for &'a BinForm {
    type Output = BinForm;
    fn sub(self, rhs: &'a BinForm) -> BinForm {
        self.checked_sub(rhs).expect("binary form subtraction")
    }
}

impl<'a> Mul<&'a BinForm> for &'a BinForm {
    type Output = BinForm;
    fn mul(self, rhs: &'a BinForm) -> BinForm {
        self.checked_mul(rhs).expect("binary form multiplication")
    }
}

impl Neg for &BinForm {
    type Output = BinForm;
    fn neg(self) -> BinForm {
        BinForm { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq(s: &str) -> BinForm {
        BinForm::parse(FieldSpec::Rationals, s).unwrap()
    }

    fn f5(s: &str) -> BinForm {
        BinForm::parse(FieldSpec::prime(5).unwrap(), s).unwrap()
    }

    #[test]
    fn valuations() {
        let f = BinForm::from_ints(FieldSpec::Rationals, &[0, 3, 1, 0, 0]);
        assert_eq!((f.t0_valuation(), f.t1_valuation()), (2, 1));
        assert_eq!(BinForm::zero(FieldSpec::Rationals).t0_valuation(), 0);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&qq("t0") * &qq("t1"), qq("t0*t1"));
        assert!((&qq("0") * &qq("t0^3")).is_zero());
        assert_eq!(&qq("t0 + t1") * &qq("t0 - t1"), qq("t0^2 - t1^2"));
        assert_eq!((&qq("t0 + t1") * &qq("t0 - t1")).degree(), Some(2));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let err = qq("t0").checked_mul(&f5("t0")).unwrap_err();
        assert!(matches!(err, PolyError::MixedFields { .. }));
        assert!(qq("t0").gcd(&f5("t1")).is_err());
    }

    #[test]
    fn addition_needs_matching_degrees_except_for_zero() {
        assert!(qq("t0").checked_add(&qq("t0^2")).is_err());
        assert_eq!(qq("0").checked_add(&qq("t0^2")).unwrap(), qq("t0^2"));
        assert!(qq("t0 - t1").checked_sub(&qq("t0 - t1")).unwrap().is_zero());
    }

    #[test]
    fn gcd_examples() {
        assert!(qq("t0").gcd(&qq("t1")).unwrap().is_one());
        assert_eq!(qq("t0^2*t1").gcd(&qq("t0*t1^3")).unwrap(), qq("t0*t1"));
        // f0 = t0(t0 - 2 t1), f1 = t1^4
        let f0 = qq("t0^2 - 2*t0*t1");
        let f1 = qq("t1^4");
        assert!(f0.gcd(&f1).unwrap().is_one());
        assert_eq!(qq("2*t0^2 - 2*t1^2").gcd(&qq("3*t0^2 + 3*t0*t1")).unwrap(), qq("t0 + t1"));
        assert_eq!(qq("0").gcd(&qq("2*t0 - 4*t1")).unwrap(), qq("t0 - 2*t1"));
        assert_eq!(qq("0").gcd(&qq("0")), Err(PolyError::BothZero));
    }

    #[test]
    fn gcd_over_prime_field_is_monic() {
        let g = f5("2*t0^2 + 4*t0*t1").gcd(&f5("3*t0*t1")).unwrap();
        assert_eq!(g, f5("t0"));
    }

    #[test]
    fn exact_division() {
        let a = qq("t0^3 - t0*t1^2");
        assert_eq!(a.div_exact(&qq("t0 + t1")).unwrap(), qq("t0^2 - t0*t1"));
        assert_eq!(a.div_exact(&qq("t0")).unwrap(), qq("t0^2 - t1^2"));
        assert!(a.div_exact(&qq("t1")).is_err());
        assert!(a.div_exact(&qq("0")).is_err());
        assert_eq!(qq("t1^5").div_exact(&qq("t1^2")).unwrap(), qq("t1^3"));
    }

    #[test]
    fn chart_remainder() {
        // (t0 + t1)^2 mod t0^2: 2 t0 t1 + t1^2 in the chart t1 = 1.
        let r = qq("t0^2 + 2*t0*t1 + t1^2").rem_in_chart(&qq("t0^2")).unwrap();
        assert_eq!(r, qq("2*t0*t1 + t1^2"));
        assert!(qq("t0^5 - t0^4*t1").is_zero_mod(&qq("t0^4")).unwrap());
        assert!(qq("t0").rem_in_chart(&qq("t0*t1")).is_err());
    }

    #[test]
    fn roots_examples() {
        let r = f5("t0*t1").roots().unwrap();
        assert_eq!(r, vec![(P1Point::affine(0), 1), (P1Point::INFINITY, 1)]);
        let r = f5("t0^2 - t1^2").roots().unwrap();
        assert_eq!(r, vec![(P1Point::affine(1), 1), (P1Point::affine(4), 1)]);
        // t0^2 - 2 t1^2: 2 is not a square mod 5.
        let irreducible = f5("t0^2 - 2*t1^2");
        let evaluations: Vec<bool> = P1Point::all(5)
            .map(|pt| {
                let fld = irreducible.field();
                irreducible.eval(&fld.residue(pt.t0), &fld.residue(pt.t1)).is_zero()
            })
            .collect();
        assert_eq!(evaluations.len(), 6);
        assert!(evaluations.iter().all(|z| !z));
        assert!(irreducible.roots().unwrap().is_empty());
        assert_eq!(f5("t0^3*t1^2").roots().unwrap(), vec![(P1Point::affine(0), 3), (P1Point::INFINITY, 2)]);
        assert!(qq("t0").roots().is_err());
    }

    #[test]
    fn distinct_roots() {
        assert_eq!(qq("t0*t1").distinct_root_count().unwrap(), 2);
        assert_eq!(qq("t1^3").distinct_root_count().unwrap(), 1);
        assert_eq!(qq("t0^2*t1 - 2*t0*t1^2").distinct_root_count().unwrap(), 3);
        assert_eq!(qq("t0^2 + t1^2").distinct_root_count().unwrap(), 2);
        assert_eq!(qq("1").distinct_root_count().unwrap(), 0);
    }

    #[test]
    fn derivatives() {
        let f = qq("t0^3 + 2*t0*t1^2");
        assert_eq!(f.deriv_t0(), qq("3*t0^2 + 2*t1^2"));
        assert_eq!(f.deriv_t1(), qq("4*t0*t1"));
        assert!(qq("7").deriv_t0().is_zero());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3*t0^2*t1 - 1/2*t1^3", "-t0 + t1", "5", "0", "t0^4", "-2/3*t0*t1"] {
            assert_eq!(qq(s).to_string(), s);
        }
        assert_eq!(f5("-t0").to_string(), "4*t0");
    }

    #[test]
    fn evaluation() {
        let f = qq("t0^2 - 3*t0*t1");
        let fld = FieldSpec::Rationals;
        assert_eq!(f.eval(&fld.int(2), &fld.int(1)), fld.int(-2));
        assert!(BinForm::zero(fld).eval(&fld.int(1), &fld.int(1)).is_zero());
    }
}
