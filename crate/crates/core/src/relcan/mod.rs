//! The multiplication map `Sym^2 A_1 -> A_2` of a genus-2 fibration over
//! `P^1`, its determinant `tau`, the conic relation it induces, and the
//! degree-six data of the section `s`.
//!
//! Conventions: `A_1 = O(1) + O(p_g + 1)`, `A_2 = O(d0) + O(d1) + O(d2)` with
//! generators `y0, y1, y2`, and after normalisation
//!
//! ```text
//!          | g0 f0 0 |
//! sigma2 = | g1 f1 0 |
//!          | g2 0  1 |
//! ```

mod example;
mod lifting;
mod stalk;

pub use example::{
    delta_on_s6prime, example_data, example_verify, DeltaImage, ExampleCase, ExampleData, ExampleReport,
};
pub use lifting::{columns_from_relation, lifting_annihilator, lifting_columns, LiftingCertificate};
pub use stalk::{s_algebra_degrees, stalk_tau_prime, xiao_bound, StalkModel, StalkMultiplicity, XiaoVerdict};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{BinForm, FieldSpec, MultiForm, PolyError, Scalar};
use crate::gring::{BundleData, FiberMonomial, GradedSection, GringError};

/// Names of the generators of `A_2`.
pub const Y_VARS: [&str; 3] = ["y0", "y1", "y2"];

#[derive(Debug, Error)]
pub enum RelcanError {
    #[error(transparent)]
    Gring(#[from] GringError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("alpha = {alpha} outside 0 <= alpha <= theta = {theta}")]
    AlphaOutOfRange { alpha: u32, theta: u32 },
    #[error("alpha = {alpha} > 0 needs p_g <= 2 alpha - theta + 4, got p_g = {p_g}, theta = {theta}")]
    AlphaBound { p_g: u32, theta: u32, alpha: u32 },
    #[error("{slot} has degree {found}, expected {expected}")]
    SlotDegree { slot: &'static str, expected: i64, found: u32 },
    #[error("forms over different fields: {0} and {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("f0 and f1 are both zero")]
    BothZero,
    #[error("gcd(f0, f1) = {0}, expected 1")]
    NotCoprime(String),
    #[error("det sigma2 vanishes identically")]
    DegenerateSigma2,
    #[error("det sigma2 has degree {found}, expected {expected}")]
    TauDegree { expected: i64, found: u32 },
    #[error("this operation needs alpha = 0, got alpha = {0}")]
    NotAlphaZero(u32),
    #[error("f0 is zero")]
    ZeroF0,
    #[error("identity failed: {0}")]
    Identity(String),
    #[error("{0}")]
    Divisibility(String),
    #[error("stalk model: {0}")]
    Stalk(String),
    #[error("inconsistent input: {0}")]
    Input(String),
}

/// `alpha` is possible for `(p_g, theta)`: either `alpha = 0`, or
/// `1 <= alpha <= theta` and `p_g <= 2 alpha - theta + 4`.
pub fn alpha_admissible(p_g: u32, theta: u32, alpha: u32) -> bool {
    alpha == 0 || (alpha <= theta && p_g as i64 <= 2 * alpha as i64 - theta as i64 + 4)
}

pub fn admissible_alphas(p_g: u32, theta: u32) -> Vec<u32> {
    (0..=theta).filter(|&a| alpha_admissible(p_g, theta, a)).collect()
}

/// Splitting type `A_2 = O(d0) + O(d1) + O(d2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitType {
    pub d0: i64,
    pub d1: i64,
    pub d2: i64,
}

impl SplitType {
    pub fn new(bundle: BundleData, alpha: u32) -> Self {
        let (p, t, a) = (bundle.p_g() as i64, bundle.theta() as i64, alpha as i64);
        SplitType { d0: p + 2 + a, d1: 2 * p + t - a, d2: 2 * p + 2 }
    }

    pub fn as_array(&self) -> [i64; 3] {
        [self.d0, self.d1, self.d2]
    }

    pub fn total(&self) -> i64 {
        self.d0 + self.d1 + self.d2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTwoData {
    pub bundle: BundleData,
    pub alpha: u32,
    pub f0: BinForm,
    pub f1: BinForm,
    pub g0: BinForm,
    pub g1: BinForm,
    pub g2: BinForm,
}

impl SigmaTwoData {
    pub fn field(&self) -> FieldSpec {
        self.f0.field()
    }

    /// Prescribed degrees of `f0, f1, g0, g1, g2`.
    pub fn slot_degrees(bundle: BundleData, alpha: u32) -> [(&'static str, i64); 5] {
        let (p, t, a) = (bundle.p_g() as i64, bundle.theta() as i64, alpha as i64);
        [("f0", a), ("f1", p + t - a - 2), ("g0", p + a), ("g1", 2 * p + t - a - 2), ("g2", 2 * p)]
    }

    pub fn forms(&self) -> [&BinForm; 5] {
        [&self.f0, &self.f1, &self.g0, &self.g1, &self.g2]
    }

    /// Random data with coprime `f0, f1` and nonzero determinant; `alpha`
    /// must be admissible.
    pub fn random<R: Rng + ?Sized>(
        bundle: BundleData,
        alpha: u32,
        field: FieldSpec,
        rng: &mut R,
    ) -> Result<Self, RelcanError> {
        check_admissible(bundle, alpha)?;
        let field = field.checked()?;
        let deg = Self::slot_degrees(bundle, alpha).map(|(_, d)| d as u32);
        loop {
            let data = SigmaTwoData {
                bundle,
                alpha,
                f0: BinForm::random_nonzero(field, deg[0], rng),
                f1: BinForm::random_nonzero(field, deg[1], rng),
                g0: BinForm::random(field, deg[2], rng),
                g1: BinForm::random(field, deg[3], rng),
                g2: BinForm::random(field, deg[4], rng),
            };
            if validate_sigma2(&data).is_ok() && tau_of(&data).is_ok() {
                return Ok(data);
            }
        }
    }

    /// The 3x3 matrix, row by row.
    pub fn matrix(&self) -> [[BinForm; 3]; 3] {
        let field = self.field();
        let z = BinForm::zero(field);
        [
            [self.g0.clone(), self.f0.clone(), z.clone()],
            [self.g1.clone(), self.f1.clone(), z.clone()],
            [self.g2.clone(), z, BinForm::one(field)],
        ]
    }
}

fn check_admissible(bundle: BundleData, alpha: u32) -> Result<(), RelcanError> {
    let (p_g, theta) = (bundle.p_g(), bundle.theta());
    if alpha > 0 && alpha > theta {
        return Err(RelcanError::AlphaOutOfRange { alpha, theta });
    }
    if !alpha_admissible(p_g, theta, alpha) {
        return Err(RelcanError::AlphaBound { p_g, theta, alpha });
    }
    Ok(())
}

/// Checks `alpha`, the slot degrees and `gcd(f0, f1) = 1`.
pub fn validate_sigma2(data: &SigmaTwoData) -> Result<SplitType, RelcanError> {
    check_admissible(data.bundle, data.alpha)?;
    let field = data.field();
    for f in data.forms() {
        if f.field() != field {
            return Err(RelcanError::MixedFields(field, f.field()));
        }
    }
    for ((slot, expected), f) in SigmaTwoData::slot_degrees(data.bundle, data.alpha).into_iter().zip(data.forms()) {
        if !f.fits_degree(expected) {
            return Err(RelcanError::SlotDegree { slot, expected, found: f.degree().unwrap() });
        }
    }
    if data.f0.is_zero() && data.f1.is_zero() {
        return Err(RelcanError::BothZero);
    }
    let g = data.f0.gcd(&data.f1)?;
    if !g.is_one() {
        return Err(RelcanError::NotCoprime(g.to_string()));
    }
    Ok(SplitType::new(data.bundle, data.alpha))
}

/// `det sigma2 = g0 f1 - f0 g1`, of degree `K^2 - 2 chi + 6 = 2 p_g + theta - 2`.
pub fn tau_of(data: &SigmaTwoData) -> Result<BinForm, RelcanError> {
    let tau = data.g0.checked_mul(&data.f1)?.checked_sub(&data.f0.checked_mul(&data.g1)?)?;
    let d = tau.degree().ok_or(RelcanError::DegenerateSigma2)?;
    let b = data.bundle;
    let expected = b.k2() - 2 * b.chi() + 6;
    if d as i64 != expected {
        return Err(RelcanError::TauDegree { expected, found: d });
    }
    Ok(tau)
}

/// Determinant of a 3x3 matrix of forms by full Leibniz expansion.
pub fn det3(m: &[[BinForm; 3]; 3]) -> Result<BinForm, PolyError> {
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([0, 2, 1], false),
        ([1, 0, 2], false),
        ([2, 1, 0], false),
    ];
    let mut acc = BinForm::zero(m[0][0].field());
    for (perm, even) in PERMS {
        let mut term = m[0][perm[0]].checked_mul(&m[1][perm[1]])?.checked_mul(&m[2][perm[2]])?;
        if !even {
            term = -&term;
        }
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

/// The conic relation `(f0 y0 + f1 y1)^2 - y2 (g0 y0 + g1 y1 + g2 y2)`.
///
/// The coefficient of `y^e` has degree `twist + e . (d0, d1, d2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRelation {
    pub poly: MultiForm<3>,
    pub split: SplitType,
    pub twist: i64,
}

impl QRelation {
    /// Degree prescribed for the coefficient of `y^e`.
    pub fn slot_degree(&self, e: &[u32; 3]) -> i64 {
        self.twist + e.iter().zip(self.split.as_array()).map(|(&k, d)| k as i64 * d).sum::<i64>()
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.poly.terms().all(|(e, c)| c.fits_degree(self.slot_degree(e)))
    }
}

pub fn q_relation(data: &SigmaTwoData) -> Result<QRelation, RelcanError> {
    let field = data.field();
    let y = |k| MultiForm::<3>::var(field, k);
    let lin = y(0).scale_form(&data.f0)?.checked_add(&y(1).scale_form(&data.f1)?)?;
    let g = y(0)
        .scale_form(&data.g0)?
        .checked_add(&y(1).scale_form(&data.g1)?)?
        .checked_add(&y(2).scale_form(&data.g2)?)?;
    let poly = lin.pow(2)?.checked_sub(&y(2).checked_mul(&g)?)?;
    let rel =
        QRelation { poly, split: SplitType::new(data.bundle, data.alpha), twist: -2 * (data.bundle.p_g() as i64 + 2) };
    if !rel.is_bihomogeneous() {
        return Err(RelcanError::Identity("conic relation is not bihomogeneous".into()));
    }
    Ok(rel)
}

/// For `alpha = 0` (so `f0` is a nonzero constant `c`), the coordinate change
/// `y0 = (x0 x1 - f1 y) / c`, `y1 = y`, `y2 = x1^2` turns the conic relation
/// into `x1^2 * Q` with `Q = x0^2 - g0/c x0 x1 - (g1 - f1 g0/c) y - g2 x1^2`.
/// Returns `Q` after checking that identity.
pub fn alpha_zero_quadric(data: &SigmaTwoData) -> Result<GradedSection, RelcanError> {
    if data.alpha != 0 {
        return Err(RelcanError::NotAlphaZero(data.alpha));
    }
    validate_sigma2(data)?;
    let field = data.field();
    let c_inv = data.f0.coeffs().first().and_then(Scalar::inv).ok_or(RelcanError::ZeroF0)?;
    let g0 = data.g0.scale(&c_inv);
    let x = |k| MultiForm::<4>::var(field, k);
    let x0x1 = x(0).checked_mul(&x(1))?;
    let y0 = x0x1.checked_sub(&x(2).scale_form(&data.f1)?)?.scale(&c_inv);
    let x1sq = x(1).pow(2)?;
    let substituted = q_relation(data)?.poly.substitute(&[y0, x(2), x1sq.clone()])?;

    let one = BinForm::one(field);
    let y_coeff = -&data.g1.checked_sub(&data.f1.checked_mul(&g0)?)?;
    let q = GradedSection::from_terms(
        data.bundle,
        field,
        2,
        data.bundle.quadric_twist(),
        [
            (FiberMonomial::new(2, 0, 0, 0), one),
            (FiberMonomial::new(1, 1, 0, 0), -&g0),
            (FiberMonomial::new(0, 0, 1, 0), y_coeff),
            (FiberMonomial::new(0, 2, 0, 0), -&data.g2),
        ],
    )?;
    if x1sq.checked_mul(q.poly())? != substituted {
        return Err(RelcanError::Identity("alpha = 0 substitution does not give x1^2 Q".into()));
    }
    Ok(q)
}

/// The map `Sym^3(y0, y1) -> S_6'` together with the degrees of the two
/// summands of `S_6'` and of the four source monomials
/// `y0^3, y0^2 y1, y0 y1^2, y1^3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S6Prime {
    pub rows: [[BinForm; 4]; 2],
    pub summand_degrees: [i64; 2],
    pub source_degrees: [i64; 4],
}

impl S6Prime {
    /// Entry `(r, s)` is zero or of degree `summand_degrees[r] - source_degrees[s]`.
    pub fn is_homogeneous(&self) -> bool {
        (0..2).all(|r| (0..4).all(|s| self.rows[r][s].fits_degree(self.summand_degrees[r] - self.source_degrees[s])))
    }
}

pub fn s6prime_rows(f0: &BinForm, f1: &BinForm) -> Result<[[BinForm; 4]; 2], PolyError> {
    let z = BinForm::zero(f0.field());
    let f0f1 = f0.checked_mul(f1)?;
    let f0sq = f0.pow(2);
    let f1sq = f1.pow(2);
    Ok([
        [f1sq.scale_int(3), f0f1.scale_int(-2), f0sq.clone(), z.clone()],
        [z, f1sq, f0f1.scale_int(-2), f0sq.scale_int(3)],
    ])
}

pub fn s6prime_matrix(data: &SigmaTwoData) -> Result<S6Prime, RelcanError> {
    let b = data.bundle;
    let (p, t, a) = (b.p_g() as i64, b.theta() as i64, data.alpha as i64);
    let SplitType { d0, d1, .. } = SplitType::new(b, data.alpha);
    Ok(S6Prime {
        rows: s6prime_rows(&data.f0, &data.f1)?,
        summand_degrees: [5 * p + 2 * t + a + 2, 6 * p + 3 * t - a],
        source_degrees: [3 * d0, 2 * d0 + d1, d0 + 2 * d1, 3 * d1],
    })
}

/// Columns are `(f0 y0 + f1 y1)^2 y0` and `(f0 y0 + f1 y1)^2 y1` written in the
/// basis `y0^3, y0^2 y1, y0 y1^2, y1^3`.
pub fn relation_matrix(f0: &BinForm, f1: &BinForm) -> Result<[[BinForm; 2]; 4], PolyError> {
    let z = BinForm::zero(f0.field());
    let f0f1 = f0.checked_mul(f1)?.scale_int(2);
    let f0sq = f0.pow(2);
    let f1sq = f1.pow(2);
    Ok([[f0sq.clone(), z.clone()], [f0f1.clone(), f0sq], [f1sq.clone(), f0f1], [z, f1sq]])
}

/// Product of an `n x k` and a `k x m` matrix of forms.
pub fn mat_mul<const N: usize, const K: usize, const M: usize>(
    a: &[[BinForm; K]; N],
    b: &[[BinForm; M]; K],
) -> Result<[[BinForm; M]; N], PolyError> {
    let field = a[0][0].field();
    let mut out: [[BinForm; M]; N] = std::array::from_fn(|_| std::array::from_fn(|_| BinForm::zero(field)));
    for i in 0..N {
        for j in 0..M {
            for k in 0..K {
                out[i][j] = out[i][j].checked_add(&a[i][k].checked_mul(&b[k][j])?)?;
            }
        }
    }
    Ok(out)
}

/// `deg R_3' = deg det A_1 + deg tau`, which must equal `3 p_g + theta`.
pub fn r3_prime_degree(bundle: BundleData) -> i64 {
    let det_a1 = 1 + (bundle.p_g() as i64 + 1);
    det_a1 + (bundle.k2() - 2 * bundle.chi() + 6)
}
