//! `f0^4` annihilates the cokernel of
//!
//! ```text
//! | f0^2     0     0    |
//! | 2 f0 f1  f0^2  0    |
//! | -g0      0     f0^2 |
//! ```
//!
//! which controls lifting sections from `s` to `2s`. Certificates are explicit
//! combinations of the columns, found by back-substitution.

use serde::Serialize;

use super::{q_relation, QRelation, RelcanError, SigmaTwoData};
use crate::exactpoly::{BinForm, MultiForm, PolyError};

type Column = [BinForm; 3];

/// Columns of the presentation matrix, `columns[c][row]`.
pub fn lifting_columns(data: &SigmaTwoData) -> Result<[Column; 3], PolyError> {
    let z = BinForm::zero(data.field());
    let f0sq = data.f0.pow(2);
    Ok([
        [f0sq.clone(), data.f0.checked_mul(&data.f1)?.scale_int(2), -&data.g0],
        [z.clone(), f0sq.clone(), z.clone()],
        [z.clone(), z, f0sq],
    ])
}

/// Reads the same columns off the conic relation: column `j` lists the
/// coefficients of `y0^3, y0^2 y1, y0^2 y2` in `Q * y_j`.
pub fn columns_from_relation(rel: &QRelation) -> Result<[Column; 3], PolyError> {
    let field = rel.poly.field();
    let mut out: [Column; 3] = std::array::from_fn(|_| std::array::from_fn(|_| BinForm::zero(field)));
    for (j, col) in out.iter_mut().enumerate() {
        let shifted = rel.poly.checked_mul(&MultiForm::<3>::var(field, j))?;
        *col = [shifted.coeff(&[3, 0, 0]), shifted.coeff(&[2, 1, 0]), shifted.coeff(&[2, 0, 1])];
    }
    Ok(out)
}

/// Solves `sum_c x_c columns[c] = target` for a lower-triangular column set.
fn back_substitute(columns: &[Column; 3], target: &Column) -> Result<Column, RelcanError> {
    let field = target[0].field();
    let mut x: Column = std::array::from_fn(|_| BinForm::zero(field));
    for r in 0..3 {
        let mut rhs = target[r].clone();
        for c in 0..r {
            rhs = rhs.checked_sub(&columns[c][r].checked_mul(&x[c])?)?;
        }
        x[r] = rhs.div_exact(&columns[r][r]).map_err(|e| match e {
            PolyError::NotDivisible { .. } => RelcanError::Identity(format!("row {r} of the certificate is not exact")),
            other => other.into(),
        })?;
    }
    Ok(x)
}

fn combine(columns: &[Column; 3], x: &Column) -> Result<Column, PolyError> {
    let field = x[0].field();
    let mut out: Column = std::array::from_fn(|_| BinForm::zero(field));
    for c in 0..3 {
        for r in 0..3 {
            out[r] = out[r].checked_add(&x[c].checked_mul(&columns[c][r])?)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftingCertificate {
    pub f0_fourth: BinForm,
    pub columns: [Column; 3],
    /// Coefficients `(c1, c2, c3)` with `c1 col1 + c2 col2 + c3 col3 = f0^4 e_i`.
    pub coefficients: [Column; 3],
    /// The displayed columns agree with those read off the conic relation.
    pub columns_match_relation: bool,
    /// Every combination re-expands to `f0^4 e_i` exactly.
    pub verified: bool,
}

pub fn lifting_annihilator(data: &SigmaTwoData) -> Result<LiftingCertificate, RelcanError> {
    if data.f0.is_zero() {
        return Err(RelcanError::ZeroF0);
    }
    let field = data.field();
    let columns = lifting_columns(data)?;
    let f0_fourth = data.f0.pow(4);
    let mut coefficients: [Column; 3] = std::array::from_fn(|_| std::array::from_fn(|_| BinForm::zero(field)));
    let mut verified = true;
    for i in 0..3 {
        let mut target: Column = std::array::from_fn(|_| BinForm::zero(field));
        target[i] = f0_fourth.clone();
        let x = back_substitute(&columns, &target)?;
        let back = combine(&columns, &x)?;
        verified &= (0..3).all(|r| back[r].checked_sub(&target[r]).map(|d| d.is_zero()).unwrap_or(false));
        coefficients[i] = x;
    }
    if !verified {
        return Err(RelcanError::Identity("lifting certificate does not re-expand to f0^4 e_i".into()));
    }
    let columns_match_relation = columns_from_relation(&q_relation(data)?)? == columns;
    Ok(LiftingCertificate { f0_fourth, columns, coefficients, columns_match_relation, verified })
}
