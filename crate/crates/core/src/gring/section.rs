use rand::Rng;

use super::{BundleData, FiberMonomial, GringError};
use crate::exactpoly::{BinForm, FieldSpec, MultiForm, Scalar};

/// A section of `O_P(d H + m F)`, stored sparsely with an explicit bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSection {
    bundle: BundleData,
    d: u32,
    m: i64,
    poly: MultiForm<4>,
}

/// Which reducible term the normal-form engine rewrites next. All choices
/// reach the same normal form; the default is the reproducible one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReductionOrder {
    /// Greatest reducible monomial in `(l, i, k, j)` first.
    #[default]
    GreatestFirst,
    /// Smallest reducible monomial first.
    LeastFirst,
    /// Exhaust every `z^2` rewrite before touching `x0^2`.
    SexticFirst,
    /// Exhaust every `x0^2` rewrite before touching `z^2`.
    QuadricFirst,
}

impl GradedSection {
    pub fn zero(bundle: BundleData, field: FieldSpec, d: u32, m: i64) -> Self {
        GradedSection { bundle, d, m, poly: MultiForm::zero(field) }
    }

    /// Builds and validates a section from `(monomial, coefficient)` pairs.
    pub fn from_terms(
        bundle: BundleData,
        field: FieldSpec,
        d: u32,
        m: i64,
        terms: impl IntoIterator<Item = (FiberMonomial, BinForm)>,
    ) -> Result<Self, GringError> {
        let poly = MultiForm::from_terms(field, terms.into_iter().map(|(mono, c)| (mono.0, c)))?;
        let s = GradedSection { bundle, d, m, poly };
        s.validate()?;
        Ok(s)
    }

    /// `c * M` with the bidegree read off from `M` and `deg c`.
    pub fn monomial(bundle: BundleData, c: BinForm, mono: FiberMonomial) -> Self {
        let deg = c.degree().unwrap_or(0) as i64;
        let m = deg - mono.twist_sum(&bundle);
        GradedSection { bundle, d: mono.weight(), m, poly: MultiForm::monomial(c, mono.0) }
    }

    /// Unit section of bidegree `(0, 0)`.
    pub fn one(bundle: BundleData, field: FieldSpec) -> Self {
        Self::monomial(bundle, BinForm::one(field), FiberMonomial::ONE)
    }

    /// Random section with every admissible slot filled.
    pub fn random<R: Rng + ?Sized>(bundle: BundleData, field: FieldSpec, d: u32, m: i64, rng: &mut R) -> Self {
        let mut s = Self::zero(bundle, field, d, m);
        for mono in FiberMonomial::of_weight(d) {
            let deg = m + mono.twist_sum(&bundle);
            if deg >= 0 {
                let c = BinForm::random(field, deg as u32, rng);
                s.poly.add_term(mono.0, &c).unwrap();
            }
        }
        s
    }

    pub fn bundle(&self) -> BundleData {
        self.bundle
    }

    pub fn field(&self) -> FieldSpec {
        self.poly.field()
    }

    pub fn bidegree(&self) -> (u32, i64) {
        (self.d, self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn poly(&self) -> &MultiForm<4> {
        &self.poly
    }

    pub fn coeff(&self, mono: &FiberMonomial) -> BinForm {
        self.poly.coeff(&mono.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (FiberMonomial, &BinForm)> {
        self.poly.terms().map(|(e, c)| (FiberMonomial(*e), c))
    }

    /// Prescribed coefficient degree of `mono` in this bidegree.
    pub fn slot_degree(&self, mono: &FiberMonomial) -> i64 {
        self.m + mono.twist_sum(&self.bundle)
    }

    /// Checks fibre weights and coefficient degrees of every term.
    pub fn validate(&self) -> Result<(), GringError> {
        for (mono, c) in self.terms() {
            if mono.weight() != self.d {
                return Err(GringError::WeightMismatch { monomial: mono, expected: self.d, found: mono.weight() });
            }
            let expected = self.slot_degree(&mono);
            let found = c.degree().expect("stored coefficients are nonzero");
            if found as i64 != expected {
                return Err(GringError::DegreeMismatch { monomial: mono, expected, found });
            }
        }
        Ok(())
    }

    fn check_bundle(&self, other: &GradedSection) -> Result<(), GringError> {
        if self.bundle != other.bundle {
            return Err(GringError::BundleMismatch { left: self.bundle, right: other.bundle });
        }
        Ok(())
    }

    /// Sum of two sections of the same bidegree; a zero summand adopts the
    /// other's bidegree.
    pub fn checked_add(&self, other: &GradedSection) -> Result<GradedSection, GringError> {
        self.check_bundle(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if (self.d, self.m) != (other.d, other.m) {
            return Err(GringError::BidegreeMismatch { left: (self.d, self.m), right: (other.d, other.m) });
        }
        let poly = self.poly.checked_add(&other.poly)?;
        Ok(GradedSection { poly, ..self.clone() })
    }

    pub fn checked_sub(&self, other: &GradedSection) -> Result<GradedSection, GringError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &GradedSection) -> Result<GradedSection, GringError> {
        self.check_bundle(other)?;
        Ok(GradedSection {
            bundle: self.bundle,
            d: self.d + other.d,
            m: self.m + other.m,
            poly: self.poly.checked_mul(&other.poly)?,
        })
    }

    /// Same section over `target`, e.g. reduced modulo a prime.
    pub fn change_field(&self, target: FieldSpec) -> Result<GradedSection, GringError> {
        Ok(GradedSection { poly: self.poly.change_field(target)?, ..self.clone() })
    }

    pub fn neg(&self) -> GradedSection {
        GradedSection { poly: -&self.poly, ..self.clone() }
    }

    /// Plain evaluation at `(t0, t1)` and a fibre tuple `(x0, x1, y, z)`.
    pub fn evaluate(&self, t0: &Scalar, t1: &Scalar, fibre: &[Scalar; 4]) -> Scalar {
        self.poly.eval(t0, t1, fibre)
    }

    /// Reduces modulo the ideal `(Q, G)` where `Q = x0^2 + ...` and
    /// `G = z^2 + ...` are monic. The result has no monomial divisible by
    /// `x0^2` or `z^2`.
    pub fn normal_form(&self, q: &GradedSection, g: &GradedSection) -> Result<GradedSection, GringError> {
        self.normal_form_with(q, g, ReductionOrder::default())
    }

    pub fn normal_form_with(
        &self,
        q: &GradedSection,
        g: &GradedSection,
        order: ReductionOrder,
    ) -> Result<GradedSection, GringError> {
        self.check_bundle(q)?;
        self.check_bundle(g)?;
        let x0sq = FiberMonomial::new(2, 0, 0, 0);
        let zsq = FiberMonomial::new(0, 0, 0, 2);
        check_relation(q, &x0sq, "x0^2")?;
        check_relation(g, &zsq, "z^2")?;

        let mut cur = self.clone();
        loop {
            let reducible = cur.terms().map(|(m, _)| m).filter(|m| x0sq.divides(m) || zsq.divides(m));
            let pick = match order {
                ReductionOrder::GreatestFirst => reducible.max_by_key(|m| m.order_key()),
                ReductionOrder::LeastFirst => reducible.min_by_key(|m| m.order_key()),
                ReductionOrder::SexticFirst => {
                    let all: Vec<_> = reducible.collect();
                    all.iter().find(|m| zsq.divides(m)).or(all.first()).copied()
                }
                ReductionOrder::QuadricFirst => {
                    let all: Vec<_> = reducible.collect();
                    all.iter().find(|m| x0sq.divides(m)).or(all.first()).copied()
                }
            };
            let Some(mono) = pick else {
                return Ok(cur);
            };
            let c = cur.coeff(&mono);
            let prefer_z = order != ReductionOrder::QuadricFirst;
            let (rel, lead) = match (zsq.divides(&mono), x0sq.divides(&mono)) {
                (true, true) if prefer_z => (g, zsq),
                (true, true) => (q, x0sq),
                (true, false) => (g, zsq),
                _ => (q, x0sq),
            };
            let cofactor = GradedSection::monomial(self.bundle, c, mono.checked_div(&lead).unwrap());
            cur = cur.checked_sub(&cofactor.checked_mul(rel)?)?;
        }
    }
}

/// A rewriting relation must have unit coefficient on `lead` and no other
/// monomial divisible by `lead`.
fn check_relation(rel: &GradedSection, lead: &FiberMonomial, name: &'static str) -> Result<(), GringError> {
    if !rel.coeff(lead).is_one() {
        return Err(GringError::NotMonic(name));
    }
    for (m, _) in rel.terms() {
        if m != *lead && (lead.divides(&m) || m.order_key() > lead.order_key()) {
            return Err(GringError::BadTail(m));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bundle() -> BundleData {
        BundleData::new(2, 0).unwrap()
    }

    fn mono(s: &str) -> FiberMonomial {
        s.parse().unwrap()
    }

    /// `Q = x0^2 + q_x x1^2 + q_y y` and `G = z^2 + sum G_ijk x0^i x1^j y^k`
    /// with random coefficients.
    fn random_relations(field: FieldSpec, seed: u64) -> (GradedSection, GradedSection) {
        let b = bundle();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full_q = GradedSection::random(b, field, 2, b.quadric_twist(), &mut rng);
        let full_g = GradedSection::random(b, field, 6, b.sextic_twist(), &mut rng);
        let one = BinForm::one(field);
        let q_terms = [
            (mono("x0^2"), one.clone()),
            (mono("x1^2"), full_q.coeff(&mono("x1^2"))),
            (mono("y"), full_q.coeff(&mono("y"))),
        ];
        let q = GradedSection::from_terms(b, field, 2, b.quadric_twist(), q_terms).unwrap();
        let g_terms = full_g.terms().filter(|(m, _)| m.0[3] == 0).map(|(m, c)| (m, c.clone()));
        let g_terms = g_terms.chain([(mono("z^2"), one)]).collect::<Vec<_>>();
        let g = GradedSection::from_terms(b, field, 6, b.sextic_twist(), g_terms).unwrap();
        (q, g)
    }

    #[test]
    fn quadric_slot_degrees() {
        let b = bundle();
        let s = GradedSection::zero(b, FieldSpec::Rationals, 2, -2);
        assert_eq!(s.slot_degree(&mono("x0^2")), 0);
        assert_eq!(s.slot_degree(&mono("y")), 2);
        assert_eq!(s.slot_degree(&mono("x1^2")), 4);
    }

    #[test]
    fn validation_rejects_negative_slot() {
        let b = bundle();
        let f = FieldSpec::Rationals;
        let bad = GradedSection::from_terms(b, f, 6, b.sextic_twist(), [(mono("x0^6"), BinForm::one(f))]);
        assert!(matches!(bad, Err(GringError::DegreeMismatch { expected: -6, .. })));
        let q = GradedSection::from_terms(b, f, 2, -2, [(mono("x0^2"), BinForm::one(f))]);
        assert!(q.is_ok());
    }

    #[test]
    fn product_of_coordinates() {
        let b = bundle();
        let f = FieldSpec::Rationals;
        let x0 = GradedSection::monomial(b, BinForm::one(f), mono("x0"));
        let x1 = GradedSection::monomial(b, BinForm::one(f), mono("x1"));
        assert_eq!(x0.bidegree(), (1, -1));
        assert_eq!(x1.bidegree(), (1, -3));
        let p = x0.checked_mul(&x1).unwrap();
        assert_eq!(p.bidegree(), (2, -4));
        p.validate().unwrap();
        let one = GradedSection::one(b, f);
        assert_eq!(x0.checked_mul(&one).unwrap(), x0);
    }

    #[test]
    fn direct_rewrites() {
        let f = FieldSpec::prime(101).unwrap();
        let (q, g) = random_relations(f, 3);
        let b = bundle();
        let x0sq = GradedSection::monomial(b, BinForm::one(f), mono("x0^2"));
        let nf = x0sq.normal_form(&q, &g).unwrap();
        assert_eq!(nf, x0sq.checked_sub(&q).unwrap());
        assert_eq!(nf.coeff(&mono("y")), -&q.coeff(&mono("y")));

        let zsq = GradedSection::monomial(b, BinForm::one(f), mono("z^2"));
        let nf = zsq.normal_form(&q, &g).unwrap();
        assert!(nf.terms().all(|(m, _)| m.0[0] <= 1 && m.0[3] <= 1));
        // x0^2 y^2 and x0^4 y have negative slot degree at p_g = 2, so only G_003 feeds y^3.
        assert_eq!(nf.coeff(&mono("y^3")), -&g.coeff(&mono("y^3")));
    }

    #[test]
    fn ideal_members_reduce_to_zero() {
        let f = FieldSpec::prime(101).unwrap();
        let b = bundle();
        for seed in 0..5 {
            let (q, g) = random_relations(f, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let w = GradedSection::random(b, f, 5, 3, &mut rng);
            let v = GradedSection::random(b, f, 1, 1 - b.sextic_twist(), &mut rng);
            let u1 = q.checked_mul(&w).unwrap();
            let u2 = g.checked_mul(&v).unwrap();
            u2.validate().unwrap();
            let u = u1.checked_add(&u2).unwrap();
            assert!(!u.is_zero());
            for order in [
                ReductionOrder::GreatestFirst,
                ReductionOrder::LeastFirst,
                ReductionOrder::SexticFirst,
                ReductionOrder::QuadricFirst,
            ] {
                assert!(u.normal_form_with(&q, &g, order).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn non_monic_relation_rejected() {
        let f = FieldSpec::Rationals;
        let (q, g) = random_relations(f, 1);
        let b = bundle();
        let q2 = GradedSection::monomial(b, BinForm::from_ints(f, &[2]), mono("x0^2"));
        let s = GradedSection::one(b, f);
        assert_eq!(s.normal_form(&q2, &g), Err(GringError::NotMonic("x0^2")));
        assert!(s.normal_form(&q, &g).is_ok());
    }
}
