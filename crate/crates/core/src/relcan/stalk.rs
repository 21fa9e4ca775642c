//! Local multiplicities of `tau'`, degrees of the algebra of the section, and
//! the slope inequality with its correction term.

use serde::Serialize;

use super::RelcanError;
use crate::exactpoly::{BinForm, MultiForm};

/// Local model `t^r y - f2(x0, x1; t)` near a point of `tau` of multiplicity
/// `r`. Coefficients are binary forms read in the chart `t1 = 1`, so the local
/// parameter is `t = t0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StalkModel {
    pub r: u32,
    /// Quadratic in `(x0, x1)`.
    pub f2loc: MultiForm<2>,
    /// Optional sextic in `(x0, x1, y)`; carried along, not used by the
    /// multiplicity computation.
    pub f6loc: Option<MultiForm<3>>,
}

impl StalkModel {
    pub fn new(r: u32, f2loc: MultiForm<2>) -> Result<Self, RelcanError> {
        if r == 0 {
            return Err(RelcanError::Stalk("multiplicity r must be at least 1".into()));
        }
        if let Some((e, _)) = f2loc.terms().find(|(e, _)| e[0] + e[1] != 2) {
            return Err(RelcanError::Stalk(format!("f2loc has a term x0^{} x1^{} of weight != 2", e[0], e[1])));
        }
        Ok(StalkModel { r, f2loc, f6loc: None })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StalkMultiplicity {
    pub r: u32,
    pub r_double_prime: u32,
    pub r_prime: u32,
    pub section_through_isolated_fixed_point: bool,
}

/// `r'' = min(r, ord_t a(t))` where `f2loc(x0, 0; t) = a(t) x0^2`, the power of
/// `t` dividing `t^r y - a(t) x0^2`; then `r' = r - r''`.
pub fn stalk_tau_prime(model: &StalkModel) -> Result<StalkMultiplicity, RelcanError> {
    if model.r == 0 {
        return Err(RelcanError::Stalk("multiplicity r must be at least 1".into()));
    }
    let a = model.f2loc.coeff(&[2, 0]);
    let r = model.r;
    let r_double_prime = if a.is_zero() { r } else { r.min(a.t0_valuation()) };
    let r_prime = r - r_double_prime;
    Ok(StalkMultiplicity { r, r_double_prime, r_prime, section_through_isolated_fixed_point: r_prime > 0 })
}

/// `deg S_d = d deg S_1 + floor(d/2) deg tau'` for `d = 1..=d_max`.
pub fn s_algebra_degrees(deg_s1: i64, tau_prime: &BinForm, d_max: u32) -> Result<Vec<i64>, RelcanError> {
    if d_max == 0 {
        return Err(RelcanError::Input("d_max must be at least 1".into()));
    }
    let t = tau_prime.degree().ok_or_else(|| RelcanError::Input("tau' is the zero form".into()))? as i64;
    Ok((1..=d_max as i64).map(|d| d * deg_s1 + (d / 2) * t).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiaoVerdict {
    pub k2: i64,
    pub chi: i64,
    pub q: i64,
    pub deg_tau: i64,
    pub deg_tau_prime: i64,
    /// `4 chi + 6 q - 10 + 3 (deg tau - deg tau')`.
    pub bound: i64,
    pub margin: i64,
    pub holds: bool,
    /// `K^2 <= 4 chi - 8`, where `q = 0` and `tau = tau'` are forced.
    pub low_slope: bool,
    pub low_slope_violated: bool,
}

pub fn xiao_bound(k2: i64, chi: i64, q: i64, deg_tau: i64, deg_tau_prime: i64) -> Result<XiaoVerdict, RelcanError> {
    if !(0..=1).contains(&q) || chi <= 0 {
        return Err(RelcanError::Input(format!("need chi > 0 and q in {{0, 1}}, got chi = {chi}, q = {q}")));
    }
    if deg_tau != k2 - 2 * chi + 6 {
        return Err(RelcanError::Input(format!("deg tau = {deg_tau} but K^2 - 2 chi + 6 = {}", k2 - 2 * chi + 6)));
    }
    if !(0..=deg_tau).contains(&deg_tau_prime) {
        return Err(RelcanError::Input(format!("deg tau' = {deg_tau_prime} outside [0, {deg_tau}]")));
    }
    let bound = 4 * chi + 6 * q - 10 + 3 * (deg_tau - deg_tau_prime);
    let low_slope = k2 <= 4 * chi - 8;
    Ok(XiaoVerdict {
        k2,
        chi,
        q,
        deg_tau,
        deg_tau_prime,
        bound,
        margin: k2 - bound,
        holds: k2 >= bound,
        low_slope,
        low_slope_violated: low_slope && (q != 0 || deg_tau != deg_tau_prime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::FieldSpec;

    const QQ: FieldSpec = FieldSpec::Rationals;

    fn model(r: u32, a: BinForm) -> StalkModel {
        StalkModel::new(r, MultiForm::monomial(a, [2, 0])).unwrap()
    }

    #[test]
    fn stalk_rows() {
        let unit = BinForm::linear(QQ.one(), QQ.int(3));
        let m = stalk_tau_prime(&model(1, unit)).unwrap();
        assert_eq!((m.r_double_prime, m.r_prime), (0, 1));
        assert!(m.section_through_isolated_fixed_point);
        let t = BinForm::t0(QQ);
        assert_eq!(stalk_tau_prime(&model(1, t.clone())).unwrap().r_prime, 0);
        let m = stalk_tau_prime(&model(2, t)).unwrap();
        assert_eq!((m.r_double_prime, m.r_prime), (1, 1));
        let m = stalk_tau_prime(&StalkModel::new(3, MultiForm::zero(QQ)).unwrap()).unwrap();
        assert_eq!(m.r_prime, 0);
    }

    #[test]
    fn stalk_shape_rejected() {
        assert!(StalkModel::new(0, MultiForm::zero(QQ)).is_err());
        let bad = MultiForm::monomial(BinForm::one(QQ), [1, 0]);
        assert!(StalkModel::new(1, bad).is_err());
    }

    #[test]
    fn s_degrees() {
        let (p, t) = (5, 1);
        let tau = BinForm::monomial(QQ.one(), 2 * p + t - 2, 0);
        let d = s_algebra_degrees(1, &tau, 6).unwrap();
        assert_eq!(d[0], 1);
        assert_eq!(d[1], 2 * p as i64 + t as i64);
        assert_eq!(d[5], 6 * p as i64 + 3 * t as i64);
        assert!(s_algebra_degrees(1, &tau, 0).is_err());
    }

    #[test]
    fn xiao_rows() {
        let v = xiao_bound(2, 3, 0, 2, 2).unwrap();
        assert!(v.holds && v.margin == 0);
        let chi = 10;
        let k2 = 4 * chi - 8;
        let v = xiao_bound(k2, chi, 0, k2 - 2 * chi + 6, 0).unwrap();
        assert!(v.low_slope_violated);
        let k2 = 4 * chi - 4;
        let dt = k2 - 2 * chi + 6;
        let v = xiao_bound(k2, chi, 1, dt, dt).unwrap();
        assert!(v.holds && v.margin == 0 && !v.low_slope);
        assert!(xiao_bound(2, 3, 0, 3, 2).is_err());
        assert!(xiao_bound(2, 3, 0, 2, 3).is_err());
    }
}
