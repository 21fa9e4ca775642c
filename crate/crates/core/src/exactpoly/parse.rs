//! Polynomial literals.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! poly   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := integer ('/' integer)? | variable ('^' integer)?
//! ```
//!
//! Variables are taken from a caller-supplied list, e.g. `t0`, `t1` for binary
//! forms or `x0`, `x1`, `y`, `z` for fibre monomials. Every error carries the
//! byte offset where it was detected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{found}` at byte {offset}")]
    UnexpectedChar { offset: usize, found: char },
    #[error("unexpected end of input at byte {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("zero denominator at byte {offset}")]
    ZeroDenominator { offset: usize },
    #[error("exponent too large at byte {offset}")]
    ExponentTooLarge { offset: usize },
    #[error("term at byte {offset} has degree {found}, expected {expected}")]
    NotHomogeneous { offset: usize, expected: u32, found: u32 },
    #[error("expected a single monomial with coefficient 1, at byte {offset}")]
    NotAMonomial { offset: usize },
}

/// One parsed term: `coeff * prod vars[k]^exponents[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub exponents: Vec<u32>,
    /// Byte offset of the start of the term.
    pub offset: usize,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(found) => ParseError::UnexpectedChar { offset: self.pos, found },
            None => ParseError::UnexpectedEnd { offset: self.pos },
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.unexpected());
        }
        Ok(digits.parse().unwrap())
    }
}

/// Parses a sum of terms over the given variable names.
pub fn parse_polynomial(src: &str, vars: &[&str]) -> Result<Vec<Term>, ParseError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut terms = Vec::new();
    cur.skip_ws();
    let mut negative = false;
    if cur.eat('-') {
        negative = true;
    } else {
        cur.eat('+');
    }
    loop {
        let mut term = parse_term(&mut cur, vars)?;
        if negative {
            term.coeff = -term.coeff;
        }
        terms.push(term);
        cur.skip_ws();
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else if cur.peek().is_none() {
            break;
        } else {
            return Err(cur.unexpected());
        }
    }
    Ok(terms)
}

fn parse_term(cur: &mut Cursor<'_>, vars: &[&str]) -> Result<Term, ParseError> {
    cur.skip_ws();
    let offset = cur.pos;
    let mut coeff = BigRational::one();
    let mut exponents = vec![0u32; vars.len()];
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = cur.integer()?;
                let mut value = BigRational::from_integer(num);
                if cur.eat('/') {
                    cur.skip_ws();
                    let at = cur.pos;
                    let den = cur.integer()?;
                    if den.is_zero() {
                        return Err(ParseError::ZeroDenominator { offset: at });
                    }
                    value /= BigRational::from_integer(den);
                }
                coeff *= value;
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = cur.pos;
                let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let k = vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| ParseError::UnknownVariable { offset: at, name: name.to_string() })?;
                let mut e = 1u32;
                if cur.eat('^') {
                    cur.skip_ws();
                    let at = cur.pos;
                    let n = cur.integer()?;
                    e = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= 1 << 16)
                        .ok_or(ParseError::ExponentTooLarge { offset: at })?;
                }
                exponents[k] += e;
            }
            _ => return Err(cur.unexpected()),
        }
        if !cur.eat('*') {
            break;
        }
    }
    Ok(Term { coeff, exponents, offset })
}

/// Parses a bare monomial such as `x1^4*y`; `1` denotes the empty monomial.
pub fn parse_monomial(src: &str, vars: &[&str]) -> Result<Vec<u32>, ParseError> {
    let terms = parse_polynomial(src, vars)?;
    match terms.as_slice() {
        [t] if t.coeff.is_one() => Ok(t.exponents.clone()),
        [t] => Err(ParseError::NotAMonomial { offset: t.offset }),
        [_, t, ..] => Err(ParseError::NotAMonomial { offset: t.offset }),
        [] => Err(ParseError::UnexpectedEnd { offset: 0 }),
    }
}
