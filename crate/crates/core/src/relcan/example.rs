//! Three explicit `sigma2` with `alpha > 0` and the degree-six equation of
//! the branch divisor near the section.
//!
//! Affine data `f0 = t0 - 2` is homogenised once as `t0 - 2 t1`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{q_relation, tau_of, validate_sigma2, RelcanError, SigmaTwoData, SplitType, Y_VARS};
use crate::exactpoly::{BinForm, FieldSpec, MultiForm, PolyError};
use crate::gring::BundleData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExampleCase {
    /// `(alpha, theta, K^2, p_g) = (1, 1, 15, 5)`
    AlphaOneThetaOne,
    /// `(1, 2, 12, 4)`
    AlphaOneThetaTwo,
    /// `(2, 2, 20, 6)`
    AlphaTwoThetaTwo,
}

impl ExampleCase {
    pub const ALL: [ExampleCase; 3] =
        [ExampleCase::AlphaOneThetaOne, ExampleCase::AlphaOneThetaTwo, ExampleCase::AlphaTwoThetaTwo];

    /// `(alpha, theta, K^2, p_g)`.
    pub fn row(self) -> (u32, u32, i64, u32) {
        match self {
            ExampleCase::AlphaOneThetaOne => (1, 1, 15, 5),
            ExampleCase::AlphaOneThetaTwo => (1, 2, 12, 4),
            ExampleCase::AlphaTwoThetaTwo => (2, 2, 20, 6),
        }
    }

    pub fn alpha(self) -> u32 {
        self.row().0
    }

    pub fn theta(self) -> u32 {
        self.row().1
    }

    pub fn p_g(self) -> u32 {
        self.row().3
    }

    /// Short name, e.g. `alpha1-theta2`.
    pub fn slug(self) -> String {
        format!("alpha{}-theta{}", self.alpha(), self.theta())
    }
}

impl fmt::Display for ExampleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, t, k2, p) = self.row();
        write!(f, "({a},{t},{k2},{p})")
    }
}

impl Serialize for ExampleCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ExampleCase {
    type Err = String;

    /// Accepts `alpha1-theta1` or the row `1,1,15,5` (parentheses optional).
    fn from_str(s: &str) -> Result<Self, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        ExampleCase::ALL
            .into_iter()
            .find(|c| c.slug() == compact || c.to_string().trim_matches(['(', ')']) == compact)
            .ok_or_else(|| format!("unknown example `{s}`; expected one of 1,1,15,5 | 1,2,12,4 | 2,2,20,6"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleData {
    pub case: ExampleCase,
    pub sigma: SigmaTwoData,
    /// `f0 (t1^(theta-alpha) y1^2 - y0 y2)(f0 y1 - 2 t1^(p_g-2) y2) - 4 f0^2 y0 y1 y2`,
    /// i.e. `f0^4` times the cubic part `F_{Delta_0}` of the branch equation.
    pub numerator: MultiForm<3>,
}

pub fn example_data(case: ExampleCase, field: FieldSpec) -> Result<ExampleData, RelcanError> {
    let field = field.checked()?;
    let (alpha, theta, _, p_g) = case.row();
    let bundle = BundleData::new(p_g as i64, theta as i64)?;
    let t0 = BinForm::t0(field);
    let t1 = BinForm::t1(field);
    let f0 = match alpha {
        1 => t0.clone(),
        _ => &t0 * &BinForm::linear(field.one(), field.int(-2)),
    };
    let sigma = SigmaTwoData {
        bundle,
        alpha,
        f0: f0.clone(),
        f1: t1.pow(alpha + 2),
        g0: t1.pow(p_g + alpha),
        g1: f0.pow((p_g + 2) / alpha + 1),
        g2: BinForm::zero(field),
    };
    let y = |k| MultiForm::<3>::var(field, k);
    let a = y(1).pow(2)?.scale_form(&t1.pow(theta - alpha))?.checked_sub(&y(0).checked_mul(&y(2))?)?;
    let b = y(1).scale_form(&f0)?.checked_sub(&y(2).scale_form(&t1.pow(p_g - 2).scale_int(2))?)?;
    let cross = y(0).checked_mul(&y(1))?.checked_mul(&y(2))?.scale_form(&f0.pow(2).scale_int(4))?;
    let numerator = a.checked_mul(&b)?.scale_form(&f0)?.checked_sub(&cross)?;
    Ok(ExampleData { case, sigma, numerator })
}

/// The map `Sym^3 -> S_6'` induced by the cubic part, in the basis of the two
/// summands: `(F120 / f0^2, (3 f0 F030 - 2 f1 F120) / f0^3)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaImage {
    pub first: BinForm,
    pub second: BinForm,
    /// Both entries vanish; the map is known to be nonzero, so this marks
    /// data outside the classified regime.
    pub zero_map: bool,
}

pub fn delta_on_s6prime(f120: &BinForm, f030: &BinForm, data: &SigmaTwoData) -> Result<DeltaImage, RelcanError> {
    let f0 = &data.f0;
    if f0.is_zero() {
        return Err(RelcanError::ZeroF0);
    }
    let exact = |num: BinForm, den: BinForm, what: &str| {
        num.div_exact(&den).map_err(|e| match e {
            PolyError::NotDivisible { .. } => {
                RelcanError::Divisibility(format!("{what} is not divisible by {den}; F120 = {f120}, F030 = {f030}"))
            }
            other => other.into(),
        })
    };
    let first = exact(f120.clone(), f0.pow(2), "F120")?;
    let num = f0.checked_mul(f030)?.scale_int(3).checked_sub(&data.f1.checked_mul(f120)?.scale_int(2))?;
    let second = exact(num, f0.pow(3), "3 f0 F030 - 2 f1 F120")?;
    let zero_map = first.is_zero() && second.is_zero();
    Ok(DeltaImage { first, second, zero_map })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub case: ExampleCase,
    pub field: FieldSpec,
    pub split_type: SplitType,
    pub f0: BinForm,
    pub f1: BinForm,
    pub g0: BinForm,
    pub g1: BinForm,
    pub tau: BinForm,
    /// `tau = +-(t1^(p_g + 2 alpha + 2) - f0^((p_g + 2)/alpha + 2))`.
    pub tau_matches: bool,
    pub numerator: String,
    /// Every `F_ijk` has degree `i d0 + j d1 + k d2 - (6 p_g + 2 theta) + 4 alpha`.
    pub numerator_degrees: bool,
    /// `f1^3 N - (B0' y0 + B1' y1 + B2' y2) Q` vanishes mod `f0^4`, with
    /// `B0' = -2 f0 F030`, `B1' = f1 F030`, `B2' = -2 g0 F030 / f0`.
    pub congruence_mod_f0_4: bool,
    pub f111: BinForm,
    /// `F111 = -5 f0^2`.
    pub f111_matches: bool,
    /// `F_{Delta_0}` restricted to `s`, parametrised by `(y0, y1, y2) = (f1, -f0, 0) u`.
    pub restriction: BinForm,
    /// The restriction is a constant multiple of `t1^(theta-alpha) f0`.
    pub restriction_matches: bool,
    pub restriction_distinct_roots: u32,
    pub delta: DeltaImage,
    pub passed: bool,
}

pub fn example_verify(case: ExampleCase, field: FieldSpec) -> Result<ExampleReport, RelcanError> {
    let ex = example_data(case, field)?;
    let d = &ex.sigma;
    let field = d.field();
    let split = validate_sigma2(d)?;
    let (alpha, theta, _, p_g) = case.row();
    let t1 = BinForm::t1(field);

    let tau = tau_of(d)?;
    let expected_tau = t1.pow(p_g + 2 * alpha + 2).checked_sub(&d.f0.pow((p_g + 2) / alpha + 2))?;
    let tau_matches = tau == expected_tau || tau == -&expected_tau;

    let n = &ex.numerator;
    let b = d.bundle;
    let shift = b.sextic_twist() + 4 * alpha as i64;
    let numerator_degrees = n.terms().all(|(e, c)| {
        let deg: i64 = e.iter().zip(split.as_array()).map(|(&k, dk)| k as i64 * dk).sum();
        c.fits_degree(deg + shift)
    });

    let f030 = n.coeff(&[0, 3, 0]);
    let f120 = n.coeff(&[1, 2, 0]);
    let q = q_relation(d)?.poly;
    let y = |k| MultiForm::<3>::var(field, k);
    let b0 = d.f0.checked_mul(&f030)?.scale_int(-2);
    let b1 = d.f1.checked_mul(&f030)?;
    let b2 = d.g0.checked_mul(&f030)?.scale_int(-2).div_exact(&d.f0)?;
    let multiplier = y(0).scale_form(&b0)?.checked_add(&y(1).scale_form(&b1)?)?.checked_add(&y(2).scale_form(&b2)?)?;
    let difference = n.scale_form(&d.f1.pow(3))?.checked_sub(&multiplier.checked_mul(&q)?)?;
    let f0_4 = d.f0.pow(4);
    let mut congruence_mod_f0_4 = true;
    for (_, c) in difference.terms() {
        congruence_mod_f0_4 &= c.is_zero_mod(&f0_4)?;
    }

    let f111 = n.coeff(&[1, 1, 1]);
    let f111_matches = f111 == d.f0.pow(2).scale_int(-5);

    let u = MultiForm::<1>::var(field, 0);
    let param = [u.scale_form(&d.f1)?, u.scale_form(&-&d.f0)?, MultiForm::<1>::zero(field)];
    let on_s = n.substitute(&param)?.coeff(&[3]);
    let restriction = on_s
        .div_exact(&f0_4)
        .map_err(|_| RelcanError::Divisibility(format!("restriction numerator {on_s} is not divisible by f0^4")))?;
    let expected = &t1.pow(theta - alpha) * &d.f0;
    let restriction_matches = !restriction.is_zero() && restriction.monic() == expected.monic();
    let restriction_distinct_roots = restriction.distinct_root_count()?;

    let delta = delta_on_s6prime(&f120, &f030, d)?;

    let passed = tau_matches
        && numerator_degrees
        && congruence_mod_f0_4
        && f111_matches
        && restriction_matches
        && restriction_distinct_roots == theta
        && !delta.zero_map;
    Ok(ExampleReport {
        case,
        field,
        split_type: split,
        f0: d.f0.clone(),
        f1: d.f1.clone(),
        g0: d.g0.clone(),
        g1: d.g1.clone(),
        tau,
        tau_matches,
        numerator: n.display_with(&Y_VARS),
        numerator_degrees,
        congruence_mod_f0_4,
        f111,
        f111_matches,
        restriction,
        restriction_matches,
        restriction_distinct_roots,
        delta,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const QQ: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn parse_cases() {
        assert_eq!("1,1,15,5".parse::<ExampleCase>().unwrap(), ExampleCase::AlphaOneThetaOne);
        assert_eq!("(2, 2, 20, 6)".parse::<ExampleCase>().unwrap(), ExampleCase::AlphaTwoThetaTwo);
        assert_eq!("alpha1-theta2".parse::<ExampleCase>().unwrap(), ExampleCase::AlphaOneThetaTwo);
        assert!("1,1,14,5".parse::<ExampleCase>().is_err());
    }

    #[test]
    fn numerator_coefficients() {
        let ex = example_data(ExampleCase::AlphaOneThetaOne, QQ).unwrap();
        let t0 = BinForm::t0(QQ);
        assert_eq!(ex.numerator.coeff(&[0, 3, 0]), t0.pow(2));
        assert!(ex.numerator.coeff(&[1, 2, 0]).is_zero());
    }

    #[test]
    fn delta_shapes() {
        let ex = example_data(ExampleCase::AlphaOneThetaOne, QQ).unwrap();
        let h = BinForm::from_ints(QQ, &[1, 2, 0]);
        let f030 = &h * &ex.sigma.f0.pow(2);
        let img = delta_on_s6prime(&BinForm::zero(QQ), &f030, &ex.sigma).unwrap();
        assert!(img.first.is_zero());
        assert_eq!(img.second, h.scale_int(3));
        let z = BinForm::zero(QQ);
        assert!(delta_on_s6prime(&z, &z, &ex.sigma).unwrap().zero_map);
        let bad = BinForm::t1(QQ);
        assert!(matches!(delta_on_s6prime(&bad, &z, &ex.sigma), Err(RelcanError::Divisibility(_))));
    }

    #[test]
    fn first_example_second_entry_is_constant() {
        let r = example_verify(ExampleCase::AlphaOneThetaOne, QQ).unwrap();
        assert_eq!(r.delta.second.degree(), Some(0));
        assert_eq!(r.restriction_distinct_roots, 1);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn all_rows_over_both_fields() {
        for field in [QQ, FieldSpec::PrimeField { p: 10007 }] {
            for case in ExampleCase::ALL {
                let r = example_verify(case, field).unwrap();
                assert!(r.passed, "{case} over {field}: {r:?}");
                assert_eq!(r.restriction_distinct_roots, case.theta());
            }
        }
        let r = example_verify(ExampleCase::AlphaTwoThetaTwo, QQ).unwrap();
        assert_eq!(r.restriction.monic().to_string(), BinForm::from_ints(QQ, &[1, -2, 0]).to_string());
    }
}
