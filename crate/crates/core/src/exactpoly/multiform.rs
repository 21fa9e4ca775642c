use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BinForm, FieldSpec, PolyError, Scalar};

/// Sparse polynomial in `N` fibre variables whose coefficients are binary
/// forms. No homogeneity is imposed; callers that need a bigrading (see
/// `gring::GradedSection`) check it themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiForm<const N: usize> {
    field: FieldSpec,
    terms: BTreeMap<[u32; N], BinForm>,
}

impl<const N: usize> MultiForm<N> {
    pub fn zero(field: FieldSpec) -> Self {
        MultiForm { field, terms: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::monomial(BinForm::one(field), [0; N])
    }

    /// `c * prod var_k^exps[k]`.
    pub fn monomial(c: BinForm, exps: [u32; N]) -> Self {
        let mut out = Self::zero(c.field());
        if !c.is_zero() {
            out.terms.insert(exps, c);
        }
        out
    }

    /// The `k`-th variable with coefficient 1.
    pub fn var(field: FieldSpec, k: usize) -> Self {
        let mut exps = [0; N];
        exps[k] = 1;
        Self::monomial(BinForm::one(field), exps)
    }

    pub fn from_terms(
        field: FieldSpec,
        terms: impl IntoIterator<Item = ([u32; N], BinForm)>,
    ) -> Result<Self, PolyError> {
        let mut out = Self::zero(field);
        for (e, c) in terms {
            out.add_term(e, &c)?;
        }
        Ok(out)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &BinForm)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32; N]) -> BinForm {
        self.terms.get(exps).cloned().unwrap_or_else(|| BinForm::zero(self.field))
    }

    /// Adds `c * x^exps` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, exps: [u32; N], c: &BinForm) -> Result<(), PolyError> {
        if c.field() != self.field {
            return Err(PolyError::MixedFields { left: self.field, right: c.field() });
        }
        if c.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.get(&exps) {
            Some(old) => old.checked_add(c)?,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.field != other.field {
            return Err(PolyError::MixedFields { left: self.field, right: other.field });
        }
        let mut out = Self::zero(self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0; N];
                for k in 0..N {
                    e[k] = ea[k] + eb[k];
                }
                out.add_term(e, &ca.checked_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a binary form.
    pub fn scale_form(&self, c: &BinForm) -> Result<Self, PolyError> {
        let mut out = Self::zero(self.field);
        for (e, a) in &self.terms {
            out.add_term(*e, &a.checked_mul(c)?)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field);
        for (e, a) in &self.terms {
            let s = a.scale(c);
            if !s.is_zero() {
                out.terms.insert(*e, s);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<Self, PolyError> {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Substitutes `var_k -> images[k]`, where the images live in a possibly
    /// different number of variables.
    pub fn substitute<const M: usize>(&self, images: &[MultiForm<M>; N]) -> Result<MultiForm<M>, PolyError> {
        let mut out = MultiForm::<M>::zero(self.field);
        for (e, c) in &self.terms {
            let mut term = MultiForm::<M>::monomial(c.clone(), [0; M]);
            for k in 0..N {
                if e[k] > 0 {
                    term = term.checked_mul(&images[k].pow(e[k])?)?;
                }
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Applies a coefficientwise map, e.g. reduction modulo a form.
    pub fn map_coeffs(&self, mut f: impl FnMut(&BinForm) -> Result<BinForm, PolyError>) -> Result<Self, PolyError> {
        let mut out = Self::zero(self.field);
        for (e, c) in &self.terms {
            let image = f(c)?;
            out.add_term(*e, &image)?;
        }
        Ok(out)
    }

    /// Coefficientwise [`BinForm::change_field`].
    pub fn change_field(&self, target: FieldSpec) -> Result<Self, PolyError> {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            out.add_term(*e, &c.change_field(target)?)?;
        }
        Ok(out)
    }

    /// Evaluates fibre variables to scalars, returning a binary form.
    pub fn eval_fibre(&self, point: &[Scalar; N]) -> Result<BinForm, PolyError> {
        let mut out = BinForm::zero(self.field);
        for (e, c) in &self.terms {
            let mut s = self.field.one();
            for k in 0..N {
                s = &s * &point[k].pow(e[k]);
            }
            out = out.checked_add(&c.scale(&s))?;
        }
        Ok(out)
    }

    /// Full evaluation at a base point and a fibre point.
    pub fn eval(&self, t0: &Scalar, t1: &Scalar, point: &[Scalar; N]) -> Scalar {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut s = c.eval(t0, t1);
            for k in 0..N {
                s = &s * &point[k].pow(e[k]);
            }
            acc = &acc + &s;
        }
        acc
    }

    /// Partial derivative in the fibre variable `k`.
    pub fn deriv(&self, k: usize) -> Self {
        let mut out = Self::zero(self.field);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[k] -= 1;
            let d = c.scale_int(e[k] as i64);
            if !d.is_zero() {
                out.terms.insert(e2, d);
            }
        }
        out
    }

    /// Writes the polynomial with the given variable names.
    pub fn display_with(&self, names: &[&str; N]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = (0..N)
                    .filter(|&k| e[k] > 0)
                    .map(|k| if e[k] == 1 { names[k].to_string() } else { format!("{}^{}", names[k], e[k]) })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<const N: usize> fmt::Display for MultiForm<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: [String; N] = std::array::from_fn(|k| format!("v{k}"));
        let refs: [&str; N] = std::array::from_fn(|k| names[k].as_str());
        f.write_str(&self.display_with(&refs))
    }
}

impl<'a, const N: usize> Add<&'a MultiForm<N>> for &'a MultiForm<N> {
    type Output = MultiForm<N>;
    fn add(self, rhs: &'a MultiForm<N>) -> MultiForm<N> {
        self.checked_add(rhs).expect("incompatible multiforms")
    }
}

impl<'a, const N: usize> Sub<&'a MultiForm<N>> for &'a MultiForm<N> {
    type Output = MultiForm<N>;
    fn sub(self, rhs: &'a MultiForm<N>) -> MultiForm<N> {
        self.checked_sub(rhs).expect("incompatible multiforms")
    }
}

impl<'a, const N: usize> Mul<&'a MultiForm<N>> for &'a MultiForm<N> {
    type Output = MultiForm<N>;
    fn mul(self, rhs: &'a MultiForm<N>) -> MultiForm<N> {
        self.checked_mul(rhs).expect("incompatible multiforms")
    }
}

impl<const N: usize> Neg for &MultiForm<N> {
    type Output = MultiForm<N>;
    fn neg(self) -> MultiForm<N> {
        MultiForm { field: self.field, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}
