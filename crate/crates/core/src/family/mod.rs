//! The families `X = Q ∩ G`: coefficient degrees, random members, the
//! canonical system, parameter counts, bidouble-cover branch data and the
//! genus feasibility filter.

mod bidouble;
mod feasibility;

pub use bidouble::{bidouble_branch_data, bidouble_invariants, BranchData, BranchSource, LatticeClass};
pub use feasibility::{genus_feasibility, FeasibilityReport, GenusVerdict, InequalityCheck};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chow::{DivisorClass, IntersectionContext};
use crate::exactpoly::{BinForm, FieldSpec, PolyError};
use crate::gring::{BundleData, EquationFile, FiberMonomial, GradedSection, GringError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Gring(#[from] GringError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{slot} has degree {found}, expected {expected} by {rule}")]
    SlotDegree { slot: String, expected: i64, found: u32, rule: &'static str },
    #[error("equation shape: {0}")]
    Shape(String),
    #[error("dimension count needs theta <= 2 and p_g > 6 - 2 theta, got (p_g, theta) = ({p_g}, {theta})")]
    DimensionHypotheses { p_g: u32, theta: u32 },
    #[error("cannot force q_y of degree {degree} to split with distinct roots over {field}")]
    CannotSplit { degree: u32, field: FieldSpec },
    #[error("base must be F_0, F_1 or F_2, got F_{0}")]
    BadBase(u32),
    #[error("D_{j} + D_{k} = {sum} is not divisible by 2")]
    OddPair { j: usize, k: usize, sum: LatticeClass },
    #[error("genus feasibility needs K^2 > 0, chi > 0 and q in {{0, 1}}")]
    FeasibilityInput,
}

pub const Q_RULE: &str = "deg q_x = 2 p_g, deg q_y = 2 p_g - 2 + theta";
pub const G_RULE: &str = "deg G_ijk = -i p_g + (k - 2) theta + (6 - 2k)";

/// Parameters of a random member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub bundle: BundleData,
    pub field: FieldSpec,
    pub seed: u64,
}

/// A coefficient slot of `Q` or `G` and its prescribed degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotDegree {
    pub slot: String,
    pub monomial: String,
    pub degree: i64,
    pub forced_zero: bool,
}

/// The non-leading slots of `Q` (`q_x`, `q_y`) and of `G` (`G_ijk`).
pub fn degree_table(bundle: BundleData) -> Vec<SlotDegree> {
    let mut out = Vec::new();
    let q = GradedSection::zero(bundle, FieldSpec::Rationals, 2, bundle.quadric_twist());
    for (name, mono) in [("q_x", FiberMonomial::new(0, 2, 0, 0)), ("q_y", FiberMonomial::new(0, 0, 1, 0))] {
        let degree = q.slot_degree(&mono);
        out.push(SlotDegree { slot: name.into(), monomial: mono.to_string(), degree, forced_zero: degree < 0 });
    }
    let g = GradedSection::zero(bundle, FieldSpec::Rationals, 6, bundle.sextic_twist());
    for mono in sextic_tail_monomials() {
        let degree = g.slot_degree(&mono);
        out.push(SlotDegree { slot: g_slot_name(&mono), monomial: mono.to_string(), degree, forced_zero: degree < 0 });
    }
    out
}

/// `x0^i x1^j y^k` with `i + j + 2k = 6`, ordered by `(i, j, k)`.
pub fn sextic_tail_monomials() -> Vec<FiberMonomial> {
    let mut v: Vec<_> = FiberMonomial::of_weight(6).into_iter().filter(|m| m.0[3] == 0).collect();
    v.sort();
    v
}

pub fn g_slot_name(mono: &FiberMonomial) -> String {
    format!("G_{}{}{}", mono.0[0], mono.0[1], mono.0[2])
}

/// `Q = x0^2 + q_x x1^2 + q_y y` and `G = z^2 + sum G_ijk x0^i x1^j y^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceEquations {
    pub bundle: BundleData,
    pub q: GradedSection,
    pub g: GradedSection,
}

impl SurfaceEquations {
    /// Checks degrees and the two normal shapes.
    pub fn new(q: GradedSection, g: GradedSection) -> Result<Self, FamilyError> {
        let bundle = q.bundle();
        if g.bundle() != bundle {
            return Err(GringError::BundleMismatch { left: bundle, right: g.bundle() }.into());
        }
        if q.bidegree() != (2, bundle.quadric_twist()) || g.bidegree() != (6, bundle.sextic_twist()) {
            return Err(FamilyError::Shape("Q must lie in |2H - 2F| and G in |6H - (6p_g + 2theta)F|".into()));
        }
        check_slots(&q, "Q", Q_RULE, |m| match m.0 {
            [0, 2, 0, 0] => "q_x".into(),
            [0, 0, 1, 0] => "q_y".into(),
            _ => m.to_string(),
        })?;
        check_slots(&g, "G", G_RULE, g_slot_name)?;
        let x0sq = FiberMonomial::new(2, 0, 0, 0);
        let zsq = FiberMonomial::new(0, 0, 0, 2);
        if !q.coeff(&x0sq).is_one() {
            return Err(FamilyError::Shape("coefficient of x0^2 in Q must be 1".into()));
        }
        if let Some((m, _)) = q.terms().find(|(m, _)| *m != x0sq && m.0[0] > 0) {
            return Err(FamilyError::Shape(format!("Q may not contain {m}")));
        }
        if !g.coeff(&zsq).is_one() {
            return Err(FamilyError::Shape("coefficient of z^2 in G must be 1".into()));
        }
        if let Some((m, _)) = g.terms().find(|(m, _)| *m != zsq && m.0[3] > 0) {
            return Err(FamilyError::Shape(format!("G may not contain {m}")));
        }
        Ok(SurfaceEquations { bundle, q, g })
    }

    pub fn field(&self) -> FieldSpec {
        self.q.field()
    }

    pub fn q_x(&self) -> BinForm {
        self.q.coeff(&FiberMonomial::new(0, 2, 0, 0))
    }

    pub fn q_y(&self) -> BinForm {
        self.q.coeff(&FiberMonomial::new(0, 0, 1, 0))
    }

    pub fn g_coeff(&self, i: u32, j: u32, k: u32) -> BinForm {
        self.g.coeff(&FiberMonomial::new(i, j, k, 0))
    }

    /// The branch form `sum G_ijk x0^i x1^j y^k`, i.e. `G - z^2`.
    pub fn branch_form(&self) -> GradedSection {
        let zsq = GradedSection::monomial(self.bundle, BinForm::one(self.field()), FiberMonomial::new(0, 0, 0, 2));
        self.g.checked_sub(&zsq).expect("same bidegree")
    }

    pub fn to_file(&self) -> EquationFile {
        EquationFile::from_sections(&self.q, &self.g)
    }

    /// The same equations over `target`, e.g. reduced modulo a prime.
    pub fn change_field(&self, target: FieldSpec) -> Result<Self, FamilyError> {
        Self::new(self.q.change_field(target)?, self.g.change_field(target)?)
    }

    pub fn from_file(file: &EquationFile) -> Result<Self, FamilyError> {
        let (_, q, g) = file.to_sections().map_err(|e| with_rule(e))?;
        Self::new(q, g)
    }
}

fn check_slots(
    s: &GradedSection,
    name: &str,
    rule: &'static str,
    slot_name: impl Fn(&FiberMonomial) -> String,
) -> Result<(), FamilyError> {
    s.validate().map_err(|e| match e {
        GringError::DegreeMismatch { monomial, expected, found } => {
            FamilyError::SlotDegree { slot: format!("{name}: {}", slot_name(&monomial)), expected, found, rule }
        }
        other => other.into(),
    })
}

/// Attaches the slot-degree rule to validation failures coming out of the
/// file parser.
fn with_rule(e: GringError) -> FamilyError {
    if let GringError::Slot { slot, source } = &e {
        if let GringError::DegreeMismatch { monomial, expected, found } = **source {
            let (rule, label) =
                if slot == "G" { (G_RULE, g_slot_name(&monomial)) } else { (Q_RULE, monomial.to_string()) };
            return FamilyError::SlotDegree { slot: format!("{slot}: {label}"), expected, found, rule };
        }
    }
    e.into()
}

/// Options for [`generate_member`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MemberOptions {
    /// Draw `q_y` as a product of distinct linear forms with roots in the
    /// base field.
    pub split_q_y: bool,
}

/// Output of [`generate_member`]: the equations and any warnings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub equations: SurfaceEquations,
    pub warnings: Vec<String>,
}

/// Random member with every admissible slot filled, deterministic in the
/// seed.
pub fn generate_member(params: &FamilyParams, opts: MemberOptions) -> Result<Member, FamilyError> {
    let FamilyParams { bundle, field, seed } = *params;
    let field = field.checked()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut warnings = Vec::new();
    if bundle.theta() > 4 {
        warnings.push(format!("theta = {} > 4: smoothness of the general member is not guaranteed", bundle.theta()));
    }
    let table = degree_table(bundle);
    let deg = |slot: &str| table.iter().find(|s| s.slot == slot).unwrap().degree;

    let q_x = BinForm::random(field, deg("q_x") as u32, &mut rng);
    let dy = deg("q_y") as u32;
    let q_y = if opts.split_q_y { split_form(field, dy, &mut rng)? } else { BinForm::random(field, dy, &mut rng) };
    let one = BinForm::one(field);
    let q = GradedSection::from_terms(
        bundle,
        field,
        2,
        bundle.quadric_twist(),
        [
            (FiberMonomial::new(2, 0, 0, 0), one.clone()),
            (FiberMonomial::new(0, 2, 0, 0), q_x),
            (FiberMonomial::new(0, 0, 1, 0), q_y),
        ],
    )?;
    let mut g_terms = vec![(FiberMonomial::new(0, 0, 0, 2), one)];
    for mono in sextic_tail_monomials() {
        let d = deg(&g_slot_name(&mono));
        if d >= 0 {
            g_terms.push((mono, BinForm::random(field, d as u32, &mut rng)));
        }
    }
    let g = GradedSection::from_terms(bundle, field, 6, bundle.sextic_twist(), g_terms)?;
    Ok(Member { equations: SurfaceEquations::new(q, g)?, warnings })
}

/// `c * prod (t0 - a_i t1)` with distinct affine roots.
fn split_form<R: Rng>(field: FieldSpec, degree: u32, rng: &mut R) -> Result<BinForm, FamilyError> {
    let cannot = FamilyError::CannotSplit { degree, field };
    let roots: Vec<i64> = match field.modulus() {
        Some(p) => {
            if degree as u64 > p {
                return Err(cannot);
            }
            let mut v: Vec<i64> = sample(rng, p as usize, degree as usize).into_iter().map(|a| a as i64).collect();
            v.sort();
            v
        }
        None => {
            if degree > 19 {
                return Err(cannot);
            }
            let mut v: Vec<i64> = sample(rng, 19, degree as usize).into_iter().map(|a| a as i64 - 9).collect();
            v.sort();
            v
        }
    };
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-9..=9);
    }
    let mut f = BinForm::constant(field.int(c));
    if f.is_zero() {
        f = BinForm::one(field);
    }
    for a in roots {
        f = &f * &BinForm::linear(field.one(), field.int(-a));
    }
    Ok(f)
}

/// Fixed part and moving part of `|K_X|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalStructure {
    /// The divisor `{x1 = 0}`.
    pub fixed_part: DivisorClass,
    /// `h . F` for a fibre `F`.
    pub fixed_part_fibre_degree: i64,
    /// `K . h`.
    pub fixed_part_canonical_degree: i64,
    /// Number of fibres in the moving part, `deg h`.
    pub moving_fibres: i64,
    /// `h^0(K)`, counted as sections of `H - 2F` on `P`.
    pub section_count: i64,
    /// Basis `h x1` of `H^0(K)`, `h` running over monomials of degree `p_g - 1`.
    pub sections: Vec<String>,
    /// Degree of the rational normal curve that is the canonical image.
    pub canonical_image_degree: i64,
    /// `(p_g - 1) K.F + K.h`, which must equal `K^2`.
    pub k2_from_decomposition: i64,
}

pub fn canonical_structure(eqs: &SurfaceEquations) -> CanonicalStructure {
    let b = eqs.bundle;
    let p = b.p_g() as i64;
    let ctx = IntersectionContext::new(b);
    let quadric = DivisorClass::new(2, b.quadric_twist());
    let sextic = DivisorClass::new(6, b.sextic_twist());
    let k = DivisorClass::new(1, -2);
    let fixed = DivisorClass::new(1, -(p + 1));
    let on_x = |a: DivisorClass, c: DivisorClass| -> i64 {
        let v = ctx.top_intersection([a, c, quadric, sextic]);
        assert!(v.is_integer(), "intersection on X must be integral");
        v.to_integer().try_into().unwrap()
    };
    let fibre_deg = on_x(fixed, DivisorClass::F);
    let k_fixed = on_x(k, fixed);
    let k_fibre = on_x(k, DivisorClass::F);
    // H^0(P, H - 2F): one slot per weight-1 monomial of non-negative degree.
    let canon = GradedSection::zero(b, eqs.field(), 1, -2);
    let mut section_count = 0;
    let mut sections = Vec::new();
    for mono in FiberMonomial::of_weight(1) {
        let d = canon.slot_degree(&mono);
        if d < 0 {
            continue;
        }
        section_count += d + 1;
        for e1 in 0..=d {
            let h = BinForm::monomial(eqs.field().one(), (d - e1) as u32, e1 as u32);
            sections.push(format!("({h})*{mono}"));
        }
    }
    let moving = p - 1;
    CanonicalStructure {
        fixed_part: fixed,
        fixed_part_fibre_degree: fibre_deg,
        fixed_part_canonical_degree: k_fixed,
        moving_fibres: moving,
        section_count,
        sections,
        canonical_image_degree: section_count - 1,
        k2_from_decomposition: moving * k_fibre + k_fixed,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyDimension {
    pub expected_dim: i64,
    pub parameter_count: i64,
    /// `parameter_count - expected_dim`; reported, not interpreted.
    pub delta: i64,
}

/// Counts the free coefficients of `q_x`, `q_y` and the `G_ijk`, and
/// compares with `4 p_g + 9 - 2 theta`.
pub fn family_dimension(bundle: BundleData) -> Result<FamilyDimension, FamilyError> {
    let (p, t) = (bundle.p_g() as i64, bundle.theta() as i64);
    if t > 2 || p <= 6 - 2 * t {
        return Err(FamilyError::DimensionHypotheses { p_g: bundle.p_g(), theta: bundle.theta() });
    }
    let parameter_count = degree_table(bundle).iter().filter(|s| !s.forced_zero).map(|s| s.degree + 1).sum();
    let expected_dim = 4 * p + 9 - 2 * t;
    Ok(FamilyDimension { expected_dim, parameter_count, delta: parameter_count - expected_dim })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(p: i64, t: i64) -> BundleData {
        BundleData::new(p, t).unwrap()
    }

    fn slot(table: &[SlotDegree], name: &str) -> i64 {
        table.iter().find(|s| s.slot == name).unwrap().degree
    }

    #[test]
    fn degree_table_entries() {
        for t in 0..=6 {
            let table = degree_table(b(5, t));
            assert_eq!(slot(&table, "G_003"), t);
            assert_eq!(slot(&table, "G_060"), 6 - 2 * t);
            assert_eq!(slot(&table, "q_x"), 10);
            assert_eq!(slot(&table, "q_y"), 8 + t);
        }
        for p in 7..12 {
            for t in 0..=6 {
                let table = degree_table(b(p, t));
                assert!(table
                    .iter()
                    .filter(|s| s.slot.starts_with("G_") && !s.slot.starts_with("G_0"))
                    .all(|s| s.forced_zero));
            }
        }
        assert_eq!(degree_table(b(2, 0)).len(), 18);
    }

    #[test]
    fn retained_slots_are_nonnegative() {
        // i = 0, k <= 3 slots survive for theta <= 3; only G_060 drops at theta = 4.
        for p in 7..20 {
            for t in 0..=4 {
                let table = degree_table(b(p, t));
                let dropped: Vec<_> = table
                    .iter()
                    .filter(|s| s.slot.starts_with("G_0") && s.forced_zero)
                    .map(|s| s.slot.as_str())
                    .collect();
                if t <= 3 {
                    assert!(dropped.is_empty());
                } else {
                    assert_eq!(dropped, ["G_060"]);
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic_and_valid() {
        let params = FamilyParams { bundle: b(2, 0), field: FieldSpec::prime(101).unwrap(), seed: 7 };
        let m1 = generate_member(&params, MemberOptions::default()).unwrap();
        let m2 = generate_member(&params, MemberOptions::default()).unwrap();
        assert_eq!(m1, m2);
        m1.equations.q.validate().unwrap();
        m1.equations.g.validate().unwrap();
        let other = generate_member(&FamilyParams { seed: 8, ..params }, MemberOptions::default()).unwrap();
        assert_ne!(m1, other);
        let round = SurfaceEquations::from_file(&m1.equations.to_file()).unwrap();
        assert_eq!(round, m1.equations);
    }

    #[test]
    fn split_q_y_has_distinct_roots() {
        let f = FieldSpec::prime(101).unwrap();
        for seed in 0..10 {
            let params = FamilyParams { bundle: b(3, 1), field: f, seed };
            let m = generate_member(&params, MemberOptions { split_q_y: true }).unwrap();
            let q_y = m.equations.q_y();
            assert_eq!(q_y.degree(), Some(5));
            assert_eq!(q_y.distinct_root_count().unwrap(), 5);
        }
    }

    #[test]
    fn theta_four_branch_form_divisible_by_y() {
        let params = FamilyParams { bundle: b(10, 4), field: FieldSpec::Rationals, seed: 1 };
        let m = generate_member(&params, MemberOptions::default()).unwrap();
        assert!(m.equations.g_coeff(0, 6, 0).is_zero());
        assert!(m.equations.branch_form().terms().all(|(mono, _)| mono.0[2] >= 1));
        assert!(m.warnings.is_empty());
        let params = FamilyParams { bundle: b(10, 5), ..params };
        assert_eq!(generate_member(&params, MemberOptions::default()).unwrap().warnings.len(), 1);
    }

    #[test]
    fn canonical_system() {
        let params = FamilyParams { bundle: b(4, 1), field: FieldSpec::Rationals, seed: 0 };
        let m = generate_member(&params, MemberOptions::default()).unwrap();
        let c = canonical_structure(&m.equations);
        assert_eq!(c.section_count, 4);
        assert_eq!(c.fixed_part_fibre_degree, 2);
        assert_eq!(c.canonical_image_degree, 3);
        assert_eq!(c.fixed_part_canonical_degree, 2 * 4 + 1 - 4);
        assert_eq!(c.k2_from_decomposition, b(4, 1).k2());
        assert_eq!(c.sections.len(), 4);
    }

    #[test]
    fn dimension_counts() {
        for (p, t) in [(7, 0), (6, 1), (5, 2), (20, 2)] {
            let d = family_dimension(b(p, t)).unwrap();
            assert_eq!(d.expected_dim, 4 * p + 9 - 2 * t);
            assert_eq!(d.parameter_count, 4 * p + 16 - t);
            assert_eq!(d.delta, 7 + t);
        }
        assert_eq!(family_dimension(b(7, 0)).unwrap().parameter_count, 44);
        assert!(family_dimension(b(6, 0)).is_err());
        assert!(family_dimension(b(9, 3)).is_err());
    }

    #[test]
    fn wrong_slot_degree_cites_rule() {
        let params = FamilyParams { bundle: b(2, 0), field: FieldSpec::Rationals, seed: 0 };
        let mut file = generate_member(&params, MemberOptions::default()).unwrap().equations.to_file();
        file.g.insert("y^3".into(), "t0".into());
        let err = SurfaceEquations::from_file(&file).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("G_003") && msg.contains(G_RULE), "{msg}");
    }
}
