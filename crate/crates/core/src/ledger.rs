//! The verification ledger: named identity checks over random and exhaustive
//! instances, each with a pass/fail verdict and, where useful, an embedded
//! certificate.
//!
//! Checks are independent and run in parallel. Each trial draws from its own
//! ChaCha stream keyed by `(seed, check index, trial)`, so the ledger is
//! reproducible regardless of scheduling; entries are emitted in a fixed order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::chow::{adjunction_check, surface_invariants, DivisorClass};
use crate::exactpoly::{BinForm, FieldSpec};
use crate::family::{bidouble_branch_data, bidouble_invariants};
use crate::gring::BundleData;
use crate::relcan::{
    admissible_alphas, alpha_zero_quadric, det3, example_verify, lifting_annihilator, mat_mul, q_relation,
    r3_prime_degree, relation_matrix, s6prime_matrix, s6prime_rows, s_algebra_degrees, tau_of, validate_sigma2,
    xiao_bound, ExampleCase, RelcanError, SigmaTwoData,
};

/// Range of `p_g` used for random `sigma2` instances.
const RANDOM_PG: std::ops::RangeInclusive<u32> = 2..=12;

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("--trials must be at least 1")]
    ZeroTrials,
    #[error("the ledger needs the rationals or a prime field with p >= 7, got {0}")]
    FieldTooSmall(FieldSpec),
    #[error(transparent)]
    Poly(#[from] crate::exactpoly::PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckGroup {
    Sigma2,
    Lifting,
    S6,
    Examples,
    Bidouble,
    Invariants,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 6] = [
        CheckGroup::Sigma2,
        CheckGroup::Lifting,
        CheckGroup::S6,
        CheckGroup::Examples,
        CheckGroup::Bidouble,
        CheckGroup::Invariants,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckGroup::Sigma2 => "sigma2",
            CheckGroup::Lifting => "lifting",
            CheckGroup::S6 => "s6",
            CheckGroup::Examples => "examples",
            CheckGroup::Bidouble => "bidouble",
            CheckGroup::Invariants => "invariants",
        }
    }
}

impl fmt::Display for CheckGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckGroup {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CheckGroup::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| format!("unknown check group `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerConfig {
    pub field: FieldSpec,
    pub trials: u32,
    pub seed: u64,
    /// Empty means every group.
    pub groups: Vec<CheckGroup>,
}

impl Default for LedgerConfig {
    fn default() -> Self {
        LedgerConfig { field: FieldSpec::Rationals, trials: 20, seed: 0, groups: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub name: &'static str,
    pub group: CheckGroup,
    pub passed: bool,
    pub instances: u32,
    pub failures: u32,
    /// First failure message, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ledger {
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: u32,
    pub passed: bool,
    pub failed: Vec<&'static str>,
    pub entries: Vec<LedgerEntry>,
}

/// Accumulates trial outcomes for one check.
#[derive(Default)]
struct Tally {
    instances: u32,
    failures: u32,
    failure: Option<String>,
    certificate: Option<Value>,
}

impl Tally {
    fn record(&mut self, outcome: Result<bool, String>, what: impl FnOnce() -> String) {
        self.instances += 1;
        let msg = match outcome {
            Ok(true) => return,
            Ok(false) => what(),
            Err(e) => e,
        };
        self.failures += 1;
        self.failure.get_or_insert(msg);
    }

    fn certify<T: Serialize>(&mut self, value: &T) {
        if self.certificate.is_none() {
            self.certificate = serde_json::to_value(value).ok();
        }
    }
}

struct Ctx<'a> {
    config: &'a LedgerConfig,
    index: u64,
}

impl Ctx<'_> {
    fn rng(&self, trial: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream((self.index << 32) | trial as u64);
        rng
    }

    fn field(&self) -> FieldSpec {
        self.config.field
    }

    fn trials(&self) -> u32 {
        self.config.trials
    }

    /// A random admissible `(p_g, theta, alpha)` and matching data.
    fn random_sigma2(&self, trial: u32) -> Result<SigmaTwoData, String> {
        let mut rng = self.rng(trial);
        let p_g = rng.gen_range(RANDOM_PG);
        let theta = rng.gen_range(0..=6u32);
        let alphas = admissible_alphas(p_g, theta);
        let alpha = alphas[rng.gen_range(0..alphas.len())];
        let bundle = BundleData::new(p_g as i64, theta as i64).map_err(|e| e.to_string())?;
        SigmaTwoData::random(bundle, alpha, self.field(), &mut rng).map_err(|e| e.to_string())
    }
}

type CheckFn = fn(&Ctx) -> Tally;

const CHECKS: &[(&str, CheckGroup, CheckFn)] = &[
    ("sigma2/admissibility", CheckGroup::Sigma2, check_admissibility),
    ("sigma2/split-type", CheckGroup::Sigma2, check_split_type),
    ("sigma2/tau-degree", CheckGroup::Sigma2, check_tau_degree),
    ("sigma2/determinant", CheckGroup::Sigma2, check_determinant),
    ("conic-relation/coefficients", CheckGroup::Sigma2, check_relation_coefficients),
    ("conic-relation/alpha-zero-quadric", CheckGroup::Sigma2, check_alpha_zero),
    ("relation-splitting/degree", CheckGroup::Sigma2, check_r3_prime),
    ("slope-bound/tau-equals-tau-prime", CheckGroup::Sigma2, check_xiao),
    ("lifting/certificates", CheckGroup::Lifting, check_lifting),
    ("lifting/columns-from-relation", CheckGroup::Lifting, check_lifting_columns),
    ("s6-surjection/kernel", CheckGroup::S6, check_s6_kernel),
    ("s6-surjection/homogeneity", CheckGroup::S6, check_s6_homogeneity),
    ("s6-surjection/section-algebra-degree", CheckGroup::S6, check_s6_vs_section_algebra),
    ("example/alpha1-theta1", CheckGroup::Examples, check_example_a1t1),
    ("example/alpha1-theta2", CheckGroup::Examples, check_example_a1t2),
    ("example/alpha2-theta2", CheckGroup::Examples, check_example_a2t2),
    ("bidouble/invariants", CheckGroup::Bidouble, check_bidouble),
    ("invariants/closed-forms", CheckGroup::Invariants, check_invariants),
];

/// Names of every check, in ledger order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _, _)| *n).collect()
}

pub fn run_ledger(config: &LedgerConfig) -> Result<Ledger, LedgerError> {
    if config.trials == 0 {
        return Err(LedgerError::ZeroTrials);
    }
    let field = config.field.checked()?;
    if field.modulus().is_some_and(|p| p < 7) {
        return Err(LedgerError::FieldTooSmall(field));
    }
    let config = LedgerConfig { field, ..config.clone() };
    let selected: Vec<(usize, &(&str, CheckGroup, CheckFn))> = CHECKS
        .iter()
        .enumerate()
        .filter(|(_, (_, g, _))| config.groups.is_empty() || config.groups.contains(g))
        .collect();
    let mut entries: Vec<(usize, LedgerEntry)> = selected
        .par_iter()
        .map(|&(i, &(name, group, f))| {
            let t = f(&Ctx { config: &config, index: i as u64 });
            let entry = LedgerEntry {
                name,
                group,
                passed: t.failures == 0 && t.instances > 0,
                instances: t.instances,
                failures: t.failures,
                failure: t.failure,
                certificate: t.certificate,
            };
            (i, entry)
        })
        .collect();
    entries.sort_by_key(|(i, _)| *i);
    let entries: Vec<LedgerEntry> = entries.into_iter().map(|(_, e)| e).collect();
    let failed: Vec<&'static str> = entries.iter().filter(|e| !e.passed).map(|e| e.name).collect();
    Ok(Ledger {
        field: config.field,
        seed: config.seed,
        trials: config.trials,
        passed: failed.is_empty(),
        failed,
        entries,
    })
}

fn err(e: RelcanError) -> String {
    e.to_string()
}

/// `validate_sigma2` on monomial data accepts exactly the admissible triples,
/// exhaustively over `p_g <= 30`, `theta <= 6`, `alpha <= 6`.
fn check_admissibility(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    let field = ctx.field();
    for p_g in 2..=30u32 {
        for theta in 0..=6u32 {
            let bundle = BundleData::new(p_g as i64, theta as i64).unwrap();
            for alpha in 0..=6u32 {
                let deg = SigmaTwoData::slot_degrees(bundle, alpha).map(|(_, d)| d);
                let pow = |f: BinForm, d: i64| if d >= 0 { f.pow(d as u32) } else { BinForm::zero(field) };
                let data = SigmaTwoData {
                    bundle,
                    alpha,
                    f0: pow(BinForm::t0(field), deg[0]),
                    f1: pow(BinForm::t1(field), deg[1]),
                    g0: pow(BinForm::t1(field), deg[2]),
                    g1: pow(BinForm::t0(field), deg[3]),
                    g2: BinForm::zero(field),
                };
                let accepted = validate_sigma2(&data).is_ok();
                let expected = alpha == 0 || (alpha <= theta && p_g + theta <= 2 * alpha + 4);
                t.record(Ok(accepted == expected && (theta > 0 || accepted == (alpha == 0))), || {
                    format!("(p_g, theta, alpha) = ({p_g}, {theta}, {alpha}): accepted = {accepted}")
                });
            }
        }
    }
    t
}

fn check_split_type(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let out = ctx.random_sigma2(trial).and_then(|d| {
            let s = validate_sigma2(&d).map_err(err)?;
            let b = d.bundle;
            let (p, th, a) = (b.p_g() as i64, b.theta() as i64, d.alpha as i64);
            Ok(s.total() == 5 * p + th + 4 && s.d0 == p + 2 + a && s.d2 == 2 * p + 2)
        });
        t.record(out, || format!("trial {trial}: split type"));
    }
    t
}

fn check_tau_degree(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let out = ctx.random_sigma2(trial).and_then(|d| {
            let tau = tau_of(&d).map_err(err)?;
            let b = d.bundle;
            Ok(tau.degree().map(i64::from) == Some(b.k2() - 2 * b.chi() + 6))
        });
        t.record(out, || format!("trial {trial}: deg tau"));
    }
    t
}

fn check_determinant(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let out = ctx
            .random_sigma2(trial)
            .and_then(|d| Ok(det3(&d.matrix()).map_err(|e| e.to_string())? == tau_of(&d).map_err(err)?));
        t.record(out, || format!("trial {trial}: Leibniz determinant differs from g0 f1 - f0 g1"));
    }
    t
}

fn check_relation_coefficients(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let out = ctx.random_sigma2(trial).and_then(|d| {
            let q = q_relation(&d).map_err(err)?;
            Ok(q.is_bihomogeneous()
                && q.poly.coeff(&[2, 0, 0]) == d.f0.pow(2)
                && q.poly.coeff(&[1, 0, 1]) == -&d.g0
                && q.poly.coeff(&[0, 2, 0]) == d.f1.pow(2))
        });
        t.record(out, || format!("trial {trial}: conic relation coefficients"));
    }
    t
}

fn check_alpha_zero(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let mut rng = ctx.rng(trial);
        let p_g = rng.gen_range(RANDOM_PG);
        let theta = rng.gen_range(0..=6u32);
        let out = BundleData::new(p_g as i64, theta as i64)
            .map_err(|e| e.to_string())
            .and_then(|b| SigmaTwoData::random(b, 0, ctx.field(), &mut rng).map_err(err))
            .and_then(|d| {
                let q = alpha_zero_quadric(&d).map_err(err)?;
                q.validate().map_err(|e| e.to_string())?;
                Ok(true)
            });
        t.record(out, || format!("trial {trial}: alpha = 0 quadric"));
    }
    t
}

fn check_r3_prime(_: &Ctx) -> Tally {
    let mut t = Tally::default();
    for p in 2..=50 {
        for th in 0..=6 {
            let b = BundleData::new(p, th).unwrap();
            t.record(Ok(r3_prime_degree(b) == 3 * p + th), || format!("(p_g, theta) = ({p}, {th})"));
        }
    }
    t
}

/// With `tau = tau'` and `q = 0` the slope bound holds with margin `theta`.
fn check_xiao(_: &Ctx) -> Tally {
    let mut t = Tally::default();
    for p in 2..=50 {
        for th in 0..=6 {
            let b = BundleData::new(p, th).unwrap();
            let dt = b.k2() - 2 * b.chi() + 6;
            let out = xiao_bound(b.k2(), b.chi(), 0, dt, dt)
                .map_err(err)
                .map(|v| v.holds && v.margin == th && !v.low_slope_violated);
            t.record(out, || format!("(p_g, theta) = ({p}, {th})"));
        }
    }
    t
}

fn check_lifting(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let out = ctx.random_sigma2(trial).and_then(|d| {
            let cert = lifting_annihilator(&d).map_err(err)?;
            if d.alpha > 0 {
                t.certify(&cert);
            }
            Ok(cert.verified)
        });
        t.record(out, || format!("trial {trial}: certificate does not verify"));
    }
    t
}

fn check_lifting_columns(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let out =
            ctx.random_sigma2(trial).and_then(|d| Ok(lifting_annihilator(&d).map_err(err)?.columns_match_relation));
        t.record(out, || format!("trial {trial}: columns differ from the conic relation"));
    }
    t
}

fn check_s6_kernel(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let mut rng = ctx.rng(trial);
        let f0 = BinForm::random(ctx.field(), rng.gen_range(0..=6), &mut rng);
        let f1 = BinForm::random(ctx.field(), rng.gen_range(0..=10), &mut rng);
        let out = s6prime_rows(&f0, &f1)
            .and_then(|a| mat_mul(&a, &relation_matrix(&f0, &f1)?))
            .map(|m| m.iter().flatten().all(BinForm::is_zero))
            .map_err(|e| e.to_string());
        t.record(out, || format!("trial {trial}: f0 = {f0}, f1 = {f1}"));
    }
    t
}

fn check_s6_homogeneity(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    for trial in 0..ctx.trials() {
        let out = ctx.random_sigma2(trial).and_then(|d| {
            let m = s6prime_matrix(&d).map_err(err)?;
            if trial == 0 {
                t.certify(&m);
            }
            Ok(m.is_homogeneous())
        });
        t.record(out, || format!("trial {trial}: S6' entries not homogeneous"));
    }
    t
}

/// For `alpha = 0`, `deg S_6 = 6 + 3 deg tau` equals the top summand degree
/// `6 p_g + 3 theta` of `S_6'`, and `deg S_2 = 2 p_g + theta`.
fn check_s6_vs_section_algebra(ctx: &Ctx) -> Tally {
    let mut t = Tally::default();
    let field = ctx.field();
    for p in 2..=30u32 {
        for th in 0..=6u32 {
            let b = BundleData::new(p as i64, th as i64).unwrap();
            let tau = BinForm::monomial(field.one(), 2 * p + th - 2, 0);
            let out = s_algebra_degrees(1, &tau, 6).map_err(err).and_then(|d| {
                let data = SigmaTwoData {
                    bundle: b,
                    alpha: 0,
                    f0: BinForm::one(field),
                    f1: BinForm::monomial(field.one(), 0, p + th - 2),
                    g0: BinForm::zero(field),
                    g1: BinForm::zero(field),
                    g2: BinForm::zero(field),
                };
                let s6 = s6prime_matrix(&data).map_err(err)?;
                Ok(d[1] == (2 * p + th) as i64 && d[5] == s6.summand_degrees[1])
            });
            t.record(out, || format!("(p_g, theta) = ({p}, {th})"));
        }
    }
    t
}

fn check_example(ctx: &Ctx, case: ExampleCase) -> Tally {
    let mut t = Tally::default();
    let out = example_verify(case, ctx.field()).map_err(err).map(|r| {
        t.certify(&r);
        r.passed
    });
    t.record(out, || format!("example {case} failed"));
    t
}

fn check_example_a1t1(ctx: &Ctx) -> Tally {
    check_example(ctx, ExampleCase::AlphaOneThetaOne)
}

fn check_example_a1t2(ctx: &Ctx) -> Tally {
    check_example(ctx, ExampleCase::AlphaOneThetaTwo)
}

fn check_example_a2t2(ctx: &Ctx) -> Tally {
    check_example(ctx, ExampleCase::AlphaTwoThetaTwo)
}

fn check_bidouble(_: &Ctx) -> Tally {
    let mut t = Tally::default();
    for th in 0..=6u32 {
        for p in 2..=20u32 {
            let out = bidouble_branch_data(th, p)
                .and_then(|d| bidouble_invariants(&d))
                .map_err(|e| e.to_string())
                .and_then(|(k2, chi)| {
                    let inv = surface_invariants(p as i64, th as i64).map_err(|e| e.to_string())?;
                    Ok((k2, chi) == (inv.k2, inv.chi))
                });
            t.record(out, || format!("(p_g, theta) = ({p}, {th})"));
        }
    }
    t
}

fn check_invariants(_: &Ctx) -> Tally {
    let mut t = Tally::default();
    for p in 2..=50i64 {
        for th in 0..=6i64 {
            let out = surface_invariants(p, th).map_err(|e| e.to_string()).map(|inv| {
                let b = BundleData::new(p, th).unwrap();
                inv.k2 == 4 * p - 6 + th && inv.chi == p + 1 && adjunction_check(b) == DivisorClass::H
            });
            t.record(out, || format!("(p_g, theta) = ({p}, {th})"));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcan::alpha_admissible;

    #[test]
    fn default_run_passes() {
        let ledger = run_ledger(&LedgerConfig { trials: 5, ..Default::default() }).unwrap();
        assert!(ledger.passed, "{:?}", ledger.failed);
        assert!(ledger.entries.len() >= 10);
        assert!(ledger.entries.iter().any(|e| e.name == "s6-surjection/kernel"));
        let cert = &ledger.entries.iter().find(|e| e.name == "example/alpha2-theta2").unwrap().certificate;
        assert!(cert.is_some());
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(matches!(run_ledger(&LedgerConfig { trials: 0, ..Default::default() }), Err(LedgerError::ZeroTrials)));
        let small = LedgerConfig { field: FieldSpec::PrimeField { p: 5 }, ..Default::default() };
        assert!(run_ledger(&small).is_err());
    }

    #[test]
    fn reproducible_and_group_filter() {
        let cfg = LedgerConfig {
            field: FieldSpec::PrimeField { p: 10007 },
            trials: 4,
            seed: 99,
            groups: vec![CheckGroup::Lifting, CheckGroup::S6],
        };
        let a = run_ledger(&cfg).unwrap();
        let b = run_ledger(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.entries.iter().all(|e| matches!(e.group, CheckGroup::Lifting | CheckGroup::S6)));
        assert!(a.passed);
    }

    #[test]
    fn admissibility_oracle_agrees_with_relcan() {
        for p in 2..=30 {
            for th in 0..=6 {
                for a in 0..=6 {
                    let expected = a == 0 || (a <= th && p + th <= 2 * a + 4);
                    assert_eq!(alpha_admissible(p, th, a), expected);
                }
            }
        }
    }
}
