//! Finite-field checks on a member `X = Q ∩ G`: the nodes of the conic bundle
//! `C = {Q = 0, z = 0}` over the zeros of `q_y`, their position with respect
//! to the branch divisor, and an exhaustive quasi-smoothness sweep.
//!
//! Everything here is evidence in characteristic `p`, not a proof: a
//! singular point over `F_p` says nothing about the generic member in
//! characteristic zero, and a clean sweep only covers `F_p`-points.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{is_prime, BinForm, FieldSpec, MultiForm, P1Point, PolyError, Scalar};
use crate::family::{generate_member, FamilyError, FamilyParams, Member, MemberOptions, SurfaceEquations};

/// Largest prime accepted by the exhaustive enumerations (`p^4` fibre tuples).
pub const MAX_SWEEP_PRIME: u64 = 53;
pub const DEFAULT_SWEEP_PRIME: u64 = 11;
pub const DEFAULT_NODE_PRIME: u64 = 101;
/// Seeds tried by [`find_quasi_smooth_member`] before giving up.
pub const REGENERATION_ATTEMPTS: u64 = 5;

const WEIGHTS: [u32; 4] = [1, 1, 2, 3];

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("census prime must be a prime >= 5, got {0}")]
    BadPrime(u64),
    #[error("exhaustive enumeration is limited to p <= {max}, got {p}")]
    PrimeTooLarge { p: u64, max: u64 },
    #[error("equations are defined over {field}, cannot be read over F_{p}")]
    FieldMismatch { field: FieldSpec, p: u64 },
    #[error("q_y vanishes identically over F_{0}")]
    QyZero(u64),
    #[error("no quasi-smooth member over F_{p} among seeds {first}..{last}")]
    HardAlarm { p: u64, first: u64, last: u64 },
}

/// A point of the weighted projective bundle over `F_p`: a base point and the
/// lexicographically least tuple in the orbit of `(x0, x1, y, z)` under
/// `lambda . (x0, x1, y, z) = (lambda x0, lambda x1, lambda^2 y, lambda^3 z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WpsPoint {
    pub base: P1Point,
    pub fibre: [u64; 4],
}

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow(a: u64, e: u32, p: u64) -> u64 {
    (0..e).fold(1, |acc, _| mul(acc, a, p))
}

fn act(lambda: u64, x: &[u64; 4], p: u64) -> [u64; 4] {
    std::array::from_fn(|i| mul(pow(lambda, WEIGHTS[i], p), x[i], p))
}

/// Lexicographically least element of the orbit of `x`.
pub fn canonical_fibre(x: [u64; 4], p: u64) -> [u64; 4] {
    (1..p).map(|l| act(l, &x, p)).min().unwrap_or(x)
}

fn check_prime(p: u64) -> Result<(), CensusError> {
    if p < 5 || !is_prime(p) {
        return Err(CensusError::BadPrime(p));
    }
    Ok(())
}

fn check_sweep_prime(p: u64) -> Result<(), CensusError> {
    check_prime(p)?;
    if p > MAX_SWEEP_PRIME {
        return Err(CensusError::PrimeTooLarge { p, max: MAX_SWEEP_PRIME });
    }
    Ok(())
}

/// One representative per orbit on `F_p^4 \ {0}`, in increasing order. Walks
/// the tuples lexicographically and marks each new orbit, so the kept tuple is
/// the least element of its orbit.
pub fn fibre_representatives(p: u64) -> Result<Vec<[u64; 4]>, CensusError> {
    check_sweep_prime(p)?;
    let n = p as usize;
    let index = |x: &[u64; 4]| x.iter().fold(0usize, |acc, &c| acc * n + c as usize);
    let mut seen = vec![false; n.pow(4)];
    let mut reps = Vec::new();
    for i in 1..n.pow(4) {
        if seen[i] {
            continue;
        }
        let mut x = [0u64; 4];
        let mut r = i;
        for k in (0..4).rev() {
            x[k] = (r % n) as u64;
            r /= n;
        }
        for l in 1..p {
            seen[index(&act(l, &x, p))] = true;
        }
        reps.push(x);
    }
    Ok(reps)
}

/// Every point of the bundle over `F_p`, fibre by fibre. The bundle is
/// trivial over each chart, so the set does not depend on `(p_g, theta)`.
pub fn enumerate_points(p: u64) -> Result<impl Iterator<Item = WpsPoint>, CensusError> {
    let reps = fibre_representatives(p)?;
    Ok(P1Point::all(p).flat_map(move |base| reps.clone().into_iter().map(move |fibre| WpsPoint { base, fibre })))
}

fn scalar(p: u64, v: u64) -> Scalar {
    Scalar::Residue { value: v % p, modulus: p }
}

fn base_coords(b: P1Point, p: u64) -> (Scalar, Scalar) {
    (scalar(p, b.t0), scalar(p, b.t1))
}

/// Derivative of a form in the chart coordinate at `b`: `d/dt0` on `t1 = 1`,
/// `d/dt1` at the point `(1:0)`.
fn chart_derivative(f: &BinForm, b: P1Point) -> BinForm {
    if b.is_infinity() {
        f.deriv_t1()
    } else {
        f.deriv_t0()
    }
}

fn reduce(eqs: &SurfaceEquations, p: u64) -> Result<SurfaceEquations, CensusError> {
    check_prime(p)?;
    let field = eqs.field();
    if field.modulus().is_some_and(|q| q != p) {
        return Err(CensusError::FieldMismatch { field, p });
    }
    Ok(eqs.change_field(FieldSpec::PrimeField { p })?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocalType {
    /// `q_y` has a simple zero: the double cover of the chart `y = 1` is
    /// smooth there, and its quotient by `x -> -x` is an ordinary double point.
    A1,
    /// Multiple zero of `q_y`.
    Worse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Node {
    pub point: WpsPoint,
    pub local_type: LocalType,
    /// Derivative of `q_y` in the chart coordinate at the base point.
    pub q_y_derivative: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCensus {
    pub prime: u64,
    pub nodes: Vec<Node>,
    /// `deg q_y = 2 p_g - 2 + theta`, the node count over the algebraic closure.
    pub expected_total: u32,
    /// Fewer `F_p`-rational zeros (with multiplicity) than `deg q_y`.
    pub roots_outside_field: bool,
}

/// Nodes of `C` at `x0 = x1 = z = 0`, one per `F_p`-zero of `q_y`.
pub fn node_census(eqs: &SurfaceEquations, p: u64) -> Result<NodeCensus, CensusError> {
    let eqs = reduce(eqs, p)?;
    let q_y = eqs.q_y();
    if q_y.is_zero() {
        return Err(CensusError::QyZero(p));
    }
    let mut nodes = Vec::new();
    let mut rational_zeros = 0u32;
    for b in P1Point::all(p) {
        let (t0, t1) = base_coords(b, p);
        if !q_y.eval(&t0, &t1).is_zero() {
            continue;
        }
        let d = chart_derivative(&q_y, b).eval(&t0, &t1).residue_value();
        let local_type = if d != 0 { LocalType::A1 } else { LocalType::Worse };
        nodes.push(Node { point: WpsPoint { base: b, fibre: [0, 0, 1, 0] }, local_type, q_y_derivative: d });
    }
    for (_, m) in q_y.roots()? {
        rational_zeros += m;
    }
    let expected_total = 2 * eqs.bundle.p_g() - 2 + eqs.bundle.theta();
    Ok(NodeCensus { prime: p, nodes, expected_total, roots_outside_field: rational_zeros < expected_total })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchHit {
    pub point: WpsPoint,
    /// `G_003` at the base point.
    pub g003: u64,
    /// The full branch form `G - z^2` evaluated independently at the node.
    pub branch_value: u64,
}

/// Nodes lying on the branch divisor `{G - z^2 = 0}`; empty for a good member.
pub fn branch_disjointness(eqs: &SurfaceEquations, p: u64) -> Result<Vec<BranchHit>, CensusError> {
    let census = node_census(eqs, p)?;
    let eqs = reduce(eqs, p)?;
    let branch = eqs.branch_form();
    let g003 = eqs.g_coeff(0, 0, 3);
    let mut hits = Vec::new();
    for node in census.nodes {
        let (t0, t1) = base_coords(node.point.base, p);
        let fibre = node.point.fibre.map(|v| scalar(p, v));
        let branch_value = branch.evaluate(&t0, &t1, &fibre).residue_value();
        let g = g003.eval(&t0, &t1).residue_value();
        if branch_value == 0 || g == 0 {
            hits.push(BranchHit { point: node.point, g003: g, branch_value });
        }
    }
    Ok(hits)
}

/// A fibre polynomial with coefficients already evaluated at a base point.
struct FibrePoly {
    p: u64,
    terms: Vec<([u32; 4], u64)>,
}

impl FibrePoly {
    fn at(poly: &MultiForm<4>, b: P1Point, p: u64) -> Self {
        let (t0, t1) = base_coords(b, p);
        let terms =
            poly.terms().map(|(e, c)| (*e, c.eval(&t0, &t1).residue_value())).filter(|(_, c)| *c != 0).collect();
        FibrePoly { p, terms }
    }

    fn eval(&self, powers: &[[u64; 7]; 4]) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let m = (0..4).fold(*c, |m, k| mul(m, powers[k][e[k] as usize], p));
            (acc + m) % p
        })
    }
}

/// Power tables `x_k^e` for `e <= 6`, enough for a sextic.
fn power_table(x: &[u64; 4], p: u64) -> [[u64; 7]; 4] {
    std::array::from_fn(|k| {
        let mut row = [1u64; 7];
        for e in 1..7 {
            row[e] = mul(row[e - 1], x[k], p);
        }
        row
    })
}

/// `Q`, `G` and their five partials at one base point.
struct LocalSystem {
    rows: [[FibrePoly; 6]; 2],
}

impl LocalSystem {
    fn new(eqs: &SurfaceEquations, b: P1Point, p: u64) -> Result<Self, CensusError> {
        let build = |poly: &MultiForm<4>| -> Result<[FibrePoly; 6], CensusError> {
            let ds = poly.map_coeffs(|c| Ok(chart_derivative(c, b)))?;
            Ok([
                FibrePoly::at(poly, b, p),
                FibrePoly::at(&poly.deriv(0), b, p),
                FibrePoly::at(&poly.deriv(1), b, p),
                FibrePoly::at(&poly.deriv(2), b, p),
                FibrePoly::at(&poly.deriv(3), b, p),
                FibrePoly::at(&ds, b, p),
            ])
        };
        Ok(LocalSystem { rows: [build(eqs.q.poly())?, build(eqs.g.poly())?] })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeSingularity {
    pub point: WpsPoint,
    /// Rank of the `2 x 5` Jacobian in `(x0, x1, y, z, s)`.
    pub jacobian_rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepResult {
    pub prime: u64,
    /// Number of orbit classes on `X(F_p)`.
    pub points_on_x: u64,
    pub singularities: Vec<ConeSingularity>,
}

fn rank2(a: &[u64; 5], b: &[u64; 5], p: u64) -> u32 {
    let a_zero = a.iter().all(|&v| v == 0);
    let b_zero = b.iter().all(|&v| v == 0);
    if a_zero && b_zero {
        return 0;
    }
    for i in 0..5 {
        for j in i + 1..5 {
            if mul(a[i], b[j], p) != mul(a[j], b[i], p) {
                return 2;
            }
        }
    }
    1
}

fn sweep_fibre(
    eqs: &SurfaceEquations,
    b: P1Point,
    reps: &[[u64; 4]],
    p: u64,
) -> Result<(u64, Vec<ConeSingularity>), CensusError> {
    let sys = LocalSystem::new(eqs, b, p)?;
    let mut on_x = 0;
    let mut bad = Vec::new();
    for x in reps {
        let pw = power_table(x, p);
        let [q, g] = &sys.rows;
        if q[0].eval(&pw) != 0 || g[0].eval(&pw) != 0 {
            continue;
        }
        on_x += 1;
        let grad = |row: &[FibrePoly; 6]| -> [u64; 5] { std::array::from_fn(|k| row[k + 1].eval(&pw)) };
        let r = rank2(&grad(q), &grad(g), p);
        if r < 2 {
            bad.push(ConeSingularity { point: WpsPoint { base: b, fibre: *x }, jacobian_rank: r });
        }
    }
    Ok((on_x, bad))
}

/// Jacobian criterion at every `F_p`-point of `X`, on the charts `t1 = 1`
/// and `t0 = 1` (the latter only contributes the point `(1:0)`). Each
/// weighted orbit is tested once, at its canonical representative.
pub fn quasi_smooth_sweep(eqs: &SurfaceEquations, p: u64) -> Result<SweepResult, CensusError> {
    sweep_impl(eqs, p, true)
}

/// Single-threaded variant of [`quasi_smooth_sweep`]; the output is identical.
pub fn quasi_smooth_sweep_serial(eqs: &SurfaceEquations, p: u64) -> Result<SweepResult, CensusError> {
    sweep_impl(eqs, p, false)
}

fn sweep_impl(eqs: &SurfaceEquations, p: u64, parallel: bool) -> Result<SweepResult, CensusError> {
    check_sweep_prime(p)?;
    let eqs = reduce(eqs, p)?;
    let reps = fibre_representatives(p)?;
    let bases: Vec<P1Point> = P1Point::all(p).collect();
    let parts: Vec<(u64, Vec<ConeSingularity>)> = if parallel {
        bases.par_iter().map(|&b| sweep_fibre(&eqs, b, &reps, p)).collect::<Result<_, _>>()?
    } else {
        bases.iter().map(|&b| sweep_fibre(&eqs, b, &reps, p)).collect::<Result<_, _>>()?
    };
    let points_on_x = parts.iter().map(|(n, _)| n).sum();
    let mut singularities: Vec<ConeSingularity> = parts.into_iter().flat_map(|(_, v)| v).collect();
    singularities.sort_by_key(|s| s.point);
    Ok(SweepResult { prime: p, points_on_x, singularities })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularReport {
    pub p_g: u32,
    pub theta: u32,
    pub prime: u64,
    pub evidence: &'static str,
    pub node_census: NodeCensus,
    pub branch_hits: Vec<BranchHit>,
    /// `None` when the sweep was skipped.
    pub sweep: Option<SweepResult>,
}

pub fn singular_report(eqs: &SurfaceEquations, p: u64, run_sweep: bool) -> Result<SingularReport, CensusError> {
    let node_census = node_census(eqs, p)?;
    let branch_hits = branch_disjointness(eqs, p)?;
    let sweep = if run_sweep { Some(quasi_smooth_sweep(eqs, p)?) } else { None };
    Ok(SingularReport {
        p_g: eqs.bundle.p_g(),
        theta: eqs.bundle.theta(),
        prime: p,
        evidence: "sanity evidence in characteristic p, not a proof",
        node_census,
        branch_hits,
        sweep,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub seed: u64,
    pub singular_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiSmoothSearch {
    pub member: Member,
    pub seed: u64,
    pub attempts: Vec<Attempt>,
}

/// Draws members with seeds `seed, seed + 1, ...` until the sweep over `F_p`
/// is clean; after [`REGENERATION_ATTEMPTS`] failures this is a hard alarm.
pub fn find_quasi_smooth_member(
    params: &FamilyParams,
    opts: MemberOptions,
    p: u64,
) -> Result<QuasiSmoothSearch, CensusError> {
    let mut attempts = Vec::new();
    for k in 0..REGENERATION_ATTEMPTS {
        let seed = params.seed.wrapping_add(k);
        let member = generate_member(&FamilyParams { seed, ..*params }, opts)?;
        let sweep = quasi_smooth_sweep(&member.equations, p)?;
        attempts.push(Attempt { seed, singular_points: sweep.singularities.len() });
        if sweep.singularities.is_empty() {
            return Ok(QuasiSmoothSearch { member, seed, attempts });
        }
    }
    Err(CensusError::HardAlarm { p, first: params.seed, last: params.seed.wrapping_add(REGENERATION_ATTEMPTS - 1) })
}
