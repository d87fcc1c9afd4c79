//! δ-transversality of power series `1 + Σ_{n∈A} aₙxⁿ`, `aₙ ∈ {−1, 0, 1}`.
//!
//! `[0, x₀]` is an interval of δ-transversality when `f(x) < δ` forces
//! `f′(x) < −δ` for every member `f` and every `x ∈ [0, x₀]`. The certifier
//! explores cells `(coefficient prefix, x-subinterval)`; a cell closes once
//! every completion of its prefix has `f ≥ δ` on it, or every completion has
//! `f′ < −δ` on it.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::numeric::{Dyadic, F64Interval};

const MAX_PREFIX: usize = 64;
const MIN_WIDTH: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SeriesClass {
    Full,
    /// Admits exactly the `n ≥ 1` with `3 ∤ n − i`, for `i ∈ {1, 2}`.
    Skip(u8),
}

impl SeriesClass {
    pub fn admits(self, n: usize) -> bool {
        match self {
            SeriesClass::Full => n >= 1,
            SeriesClass::Skip(i) => n >= 1 && (n + 3 - i as usize % 3) % 3 != 0,
        }
    }

    /// Admitted indices in increasing order, `count` of them.
    pub fn indices(self, count: usize) -> Vec<usize> {
        (1..).filter(|&n| self.admits(n)).take(count).collect()
    }

    pub fn name(self) -> String {
        match self {
            SeriesClass::Full => "P".into(),
            SeriesClass::Skip(i) => format!("P{i}"),
        }
    }

    pub fn parse(s: &str) -> Result<SeriesClass, Error> {
        match s {
            "P" | "full" | "FULL" => Ok(SeriesClass::Full),
            "P1" => Ok(SeriesClass::Skip(1)),
            "P2" => Ok(SeriesClass::Skip(2)),
            _ => Err(Error::Parse(format!("unknown series class {s:?}, expected P, P1 or P2"))),
        }
    }

    fn validate(self) -> Result<(), Error> {
        match self {
            SeriesClass::Skip(i) if i != 1 && i != 2 => Err(Error::Domain(format!("skip class must be 1 or 2, got {i}"))),
            _ => Ok(()),
        }
    }
}

impl From<SeriesClass> for String {
    fn from(c: SeriesClass) -> String {
        c.name()
    }
}

impl TryFrom<String> for SeriesClass {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        SeriesClass::parse(&s)
    }
}

/// Bounds `(T, D)` with `|Σ_{n>k, n∈A} aₙxⁿ| ≤ T` and
/// `|Σ_{n>k, n∈A} n aₙxⁿ⁻¹| ≤ D` for all `x ∈ [0, x_hi]`.
pub fn class_tail_bound(class: SeriesClass, k: usize, x_hi: f64) -> Result<(F64Interval, F64Interval), Error> {
    class.validate()?;
    if !(0.0..1.0).contains(&x_hi) {
        return Err(Error::Domain(format!("tail bound needs 0 ≤ x < 1, got {x_hi}")));
    }
    let (t, d) = tail_upper(class, k, x_hi);
    Ok((F64Interval::new(-t, t), F64Interval::new(-d, d)))
}

/// Geometric tail `Σ_{n≥m} xⁿ` and its derivative over one residue class
/// `n ≡ m (mod step)`, as upper bounds.
fn geometric(m: usize, step: u32, x: F64Interval) -> (F64Interval, F64Interval) {
    let one = F64Interval::ONE;
    let q = one.sub(x.powi(step));
    let xm = x.powi(m as u32);
    let t = xm.div(q);
    // d/dx xᵐ/(1−xˢ) = (m xᵐ⁻¹ (1−xˢ) + s xᵐ⁺ˢ⁻¹) / (1−xˢ)²
    let d = if m == 0 {
        F64Interval::point(step as f64).mul(x.powi(step - 1)).div(q.mul(q))
    } else {
        let a = F64Interval::point(m as f64).mul(x.powi(m as u32 - 1)).mul(q);
        let b = F64Interval::point(step as f64).mul(x.powi(m as u32 + step - 1));
        a.add(b).div(q.mul(q))
    };
    (t, d)
}

fn tail_upper(class: SeriesClass, k: usize, x_hi: f64) -> (f64, f64) {
    if x_hi == 0.0 {
        return (0.0, if class.admits(k + 1) && k == 0 { 1.0 } else { 0.0 });
    }
    let x = F64Interval::point(x_hi);
    let (t, d) = geometric(k + 1, 1, x);
    match class {
        SeriesClass::Full => (t.hi, d.hi),
        SeriesClass::Skip(i) => {
            let mut m = k + 1;
            while (m + 3 - i as usize % 3) % 3 != 0 {
                m += 1;
            }
            let (te, de) = geometric(m, 3, x);
            (t.sub(te).hi.max(0.0), d.sub(de).hi.max(0.0))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Certified,
    Counterexample,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Coefficients from degree 0 (always 1) upward.
    pub coeffs: Vec<i8>,
    pub x: f64,
    pub f: f64,
    pub df: f64,
    /// Re-checked with exact dyadic evaluation.
    pub verified: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    pub closed_cells: u64,
    pub max_prefix: usize,
    pub max_bisections: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityOutcome {
    pub class: SeriesClass,
    pub x0: f64,
    pub delta: f64,
    pub status: Status,
    pub witness: Option<Witness>,
    pub stats: Stats,
    /// SHA-256 over the closed cells in exploration order.
    pub digest: String,
}

#[derive(Clone, Debug)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 10_000_000 }
    }
}

#[derive(Clone, Debug)]
struct Cell {
    prefix: Vec<i8>,
    xl: f64,
    xr: f64,
    bisections: u32,
}

struct Ctx {
    class: SeriesClass,
    delta: f64,
    idx: Vec<usize>,
    nodes: AtomicU64,
    budget: u64,
    stop: AtomicBool,
}

/// Positive and negative parts of `P` and `P′` at a point `x ≥ 0`, as
/// `[lower, upper]` bounds.
#[derive(Clone, Copy)]
struct Sums {
    pos: F64Interval,
    neg: F64Interval,
    dpos: F64Interval,
    dneg: F64Interval,
}

impl Sums {
    fn at(idx: &[usize], prefix: &[i8], x: f64) -> Sums {
        let xi = F64Interval::point(x);
        let mut s = Sums { pos: F64Interval::ONE, neg: F64Interval::ZERO, dpos: F64Interval::ZERO, dneg: F64Interval::ZERO };
        // xⁿ⁻¹ and xⁿ, advanced lazily to the next admitted index
        let mut prev = F64Interval::ONE;
        let mut deg = 0usize;
        for (j, &a) in prefix.iter().enumerate() {
            let n = idx[j];
            while deg + 1 < n {
                prev = prev.mul(xi);
                deg += 1;
            }
            if a == 0 {
                continue;
            }
            let pow = prev.mul(xi);
            let d = prev.scale(n as f64);
            if a > 0 {
                s.pos = s.pos.add(pow);
                s.dpos = s.dpos.add(d);
            } else {
                s.neg = s.neg.add(pow);
                s.dneg = s.dneg.add(d);
            }
        }
        s
    }

    fn point(&self) -> (F64Interval, F64Interval) {
        (self.pos.sub(self.neg), self.dpos.sub(self.dneg))
    }
}

/// Enclosures of `P` and `P′` over `[xl, xr]`, using that each monomial is
/// increasing on `x ≥ 0`.
fn range_enclosure(l: &Sums, r: &Sums) -> (F64Interval, F64Interval) {
    let f = F64Interval::new(l.pos.lo, r.pos.hi).sub(F64Interval::new(l.neg.lo, r.neg.hi));
    let df = F64Interval::new(l.dpos.lo, r.dpos.hi).sub(F64Interval::new(l.dneg.lo, r.dneg.hi));
    (f, df)
}

fn last_index(idx: &[usize], prefix: &[i8]) -> usize {
    if prefix.is_empty() {
        0
    } else {
        idx[prefix.len() - 1]
    }
}

fn full_coeffs(idx: &[usize], prefix: &[i8]) -> Vec<i8> {
    let k = last_index(idx, prefix);
    let mut c = vec![0i8; k + 1];
    c[0] = 1;
    for (j, &a) in prefix.iter().enumerate() {
        c[idx[j]] = a;
    }
    c
}

/// Exact check of `P(x) < δ` and `P′(x) ≥ −δ` at a dyadic point.
pub fn verify_witness(coeffs: &[i8], x: f64, delta: f64) -> bool {
    let (Some(xd), Some(dd)) = (Dyadic::from_f64(x), Dyadic::from_f64(delta)) else { return false };
    let mut f = Dyadic::zero();
    let mut df = Dyadic::zero();
    for &a in coeffs.iter().rev() {
        df = &(&df * &xd) + &f;
        f = &(&f * &xd) + &Dyadic::from_int(a);
    }
    f < dd && df >= -dd
}

fn point_check(ctx: &Ctx, prefix: &[i8], x: f64, sums: &Sums) -> Option<Witness> {
    let (f, df) = sums.point();
    if f.hi < ctx.delta && df.lo >= -ctx.delta {
        let coeffs = full_coeffs(&ctx.idx, prefix);
        let verified = verify_witness(&coeffs, x, ctx.delta);
        return Some(Witness { coeffs, x, f: f.mid(), df: df.mid(), verified });
    }
    None
}

enum Visit {
    Closed,
    Witness(Witness),
    Branch(Vec<Cell>),
    Stuck,
}

fn visit(ctx: &Ctx, c: &Cell) -> Visit {
    let l = Sums::at(&ctx.idx, &c.prefix, c.xl);
    let r = Sums::at(&ctx.idx, &c.prefix, c.xr);
    let xm = 0.5 * (c.xl + c.xr);
    let m = Sums::at(&ctx.idx, &c.prefix, xm);
    for (x, s) in [(xm, &m), (c.xr, &r), (c.xl, &l)] {
        if let Some(w) = point_check(ctx, &c.prefix, x, s) {
            return Visit::Witness(w);
        }
    }
    let (f, df) = range_enclosure(&l, &r);
    let (t, d) = tail_upper(ctx.class, last_index(&ctx.idx, &c.prefix), c.xr);
    let flo = F64Interval::point(f.lo).sub(F64Interval::point(t)).lo;
    let dfhi = F64Interval::point(df.hi).add(F64Interval::point(d)).hi;
    if flo >= ctx.delta || dfhi < -ctx.delta {
        return Visit::Closed;
    }
    let can_extend = c.prefix.len() < MAX_PREFIX;
    let can_bisect = c.xr - c.xl > MIN_WIDTH * c.xr.max(1.0);
    // grow the prefix while the tail dominates the spread from the x-range
    let extend = can_extend && (!can_bisect || 2.0 * t >= f.width() || 2.0 * d >= df.width());
    if extend {
        let kids = [-1i8, 0, 1]
            .iter()
            .map(|&a| {
                let mut p = c.prefix.clone();
                p.push(a);
                Cell { prefix: p, xl: c.xl, xr: c.xr, bisections: c.bisections }
            })
            .collect();
        Visit::Branch(kids)
    } else if can_bisect {
        let m = 0.5 * (c.xl + c.xr);
        Visit::Branch(vec![
            Cell { prefix: c.prefix.clone(), xl: c.xl, xr: m, bisections: c.bisections + 1 },
            Cell { prefix: c.prefix.clone(), xl: m, xr: c.xr, bisections: c.bisections + 1 },
        ])
    } else {
        Visit::Stuck
    }
}

struct SubResult {
    stats: Stats,
    hasher: Sha256,
    witness: Option<Witness>,
    inconclusive: bool,
}

fn hash_cell(h: &mut Sha256, c: &Cell) {
    h.update((c.prefix.len() as u32).to_le_bytes());
    for &a in &c.prefix {
        h.update([a as u8]);
    }
    h.update(c.xl.to_le_bytes());
    h.update(c.xr.to_le_bytes());
}

fn explore(ctx: &Ctx, root: Cell) -> SubResult {
    let mut r = SubResult { stats: Stats::default(), hasher: Sha256::new(), witness: None, inconclusive: false };
    let mut stack = vec![root];
    while let Some(c) = stack.pop() {
        if ctx.stop.load(Ordering::Relaxed) {
            r.inconclusive = true;
            break;
        }
        if ctx.nodes.fetch_add(1, Ordering::Relaxed) >= ctx.budget {
            ctx.stop.store(true, Ordering::Relaxed);
            r.inconclusive = true;
            break;
        }
        r.stats.nodes += 1;
        r.stats.max_prefix = r.stats.max_prefix.max(c.prefix.len());
        r.stats.max_bisections = r.stats.max_bisections.max(c.bisections);
        match visit(ctx, &c) {
            Visit::Closed => {
                r.stats.closed_cells += 1;
                hash_cell(&mut r.hasher, &c);
            }
            Visit::Witness(w) => {
                r.witness = Some(w);
                break;
            }
            Visit::Branch(kids) => stack.extend(kids.into_iter().rev()),
            Visit::Stuck => r.inconclusive = true,
        }
    }
    r
}

/// Certifies `[0, x0]` as an interval of δ-transversality for `class`, or
/// finds a polynomial member with `f(x) < δ ≤ …` and `f′(x) ≥ −δ`.
pub fn certify(class: SeriesClass, x0: f64, delta: f64, budget: &Budget) -> Result<TransversalityOutcome, Error> {
    class.validate()?;
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::Domain(format!("x0 must lie in (0, 1), got {x0}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let ctx = Ctx {
        class,
        delta,
        idx: class.indices(MAX_PREFIX + 1),
        nodes: AtomicU64::new(0),
        budget: budget.max_nodes,
        stop: AtomicBool::new(false),
    };
    // breadth-first until there is enough independent work to share out
    let mut frontier = vec![Cell { prefix: Vec::new(), xl: 0.0, xr: x0, bisections: 0 }];
    let mut head = SubResult { stats: Stats::default(), hasher: Sha256::new(), witness: None, inconclusive: false };
    for _ in 0..4 {
        let mut next = Vec::new();
        for c in frontier {
            ctx.nodes.fetch_add(1, Ordering::Relaxed);
            head.stats.nodes += 1;
            head.stats.max_prefix = head.stats.max_prefix.max(c.prefix.len());
            head.stats.max_bisections = head.stats.max_bisections.max(c.bisections);
            match visit(&ctx, &c) {
                Visit::Closed => {
                    head.stats.closed_cells += 1;
                    hash_cell(&mut head.hasher, &c);
                }
                Visit::Witness(w) => {
                    if head.witness.is_none() {
                        head.witness = Some(w);
                    }
                }
                Visit::Branch(kids) => next.extend(kids),
                Visit::Stuck => head.inconclusive = true,
            }
        }
        frontier = next;
        if frontier.is_empty() || head.witness.is_some() {
            break;
        }
    }
    let subs: Vec<SubResult> = if head.witness.is_some() {
        Vec::new()
    } else {
        frontier.into_par_iter().map(|c| explore(&ctx, c)).collect()
    };
    let mut stats = head.stats;
    let mut hasher = head.hasher;
    let mut witness = head.witness;
    let mut inconclusive = head.inconclusive;
    for s in subs {
        stats.nodes += s.stats.nodes;
        stats.closed_cells += s.stats.closed_cells;
        stats.max_prefix = stats.max_prefix.max(s.stats.max_prefix);
        stats.max_bisections = stats.max_bisections.max(s.stats.max_bisections);
        hasher.update(s.hasher.finalize());
        inconclusive |= s.inconclusive;
        if let Some(w) = s.witness {
            // ties go to the lexicographically smallest coefficient vector
            if witness.as_ref().map_or(true, |cur| w.coeffs < cur.coeffs) {
                witness = Some(w);
            }
        }
    }
    let status = if witness.is_some() {
        Status::Counterexample
    } else if inconclusive {
        Status::Inconclusive
    } else {
        Status::Certified
    };
    Ok(TransversalityOutcome { class, x0, delta, status, witness, stats, digest: hex::encode(hasher.finalize()) })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSearch {
    pub best: Option<TransversalityOutcome>,
    pub tried: Vec<(f64, Status)>,
}

/// Largest certified δ on the dyadic grid `2^-1, 2^-2, …, 2^-max_exp`,
/// refined by `refine` bisection steps between the last failure and the
/// first success.
pub fn delta_search(class: SeriesClass, x0: f64, max_exp: i32, refine: u32, budget: &Budget) -> Result<DeltaSearch, Error> {
    let mut tried = Vec::new();
    let mut best = None;
    let mut fail = 0.5f64;
    for e in 1..=max_exp {
        let d = 2f64.powi(-e);
        let out = certify(class, x0, d, budget)?;
        tried.push((d, out.status));
        if out.status == Status::Certified {
            best = Some(out);
            break;
        }
        fail = d;
    }
    if let Some(b) = &best {
        let mut ok = b.delta;
        if ok < fail {
            for _ in 0..refine {
                let mid = 0.5 * (ok + fail);
                let out = certify(class, x0, mid, budget)?;
                tried.push((mid, out.status));
                if out.status == Status::Certified {
                    ok = mid;
                    best = Some(out);
                } else {
                    fail = mid;
                }
            }
        }
    }
    Ok(DeltaSearch { best, tried })
}

/// `2^{-2/3}` rounded up to the next f64.
pub fn two_pow_minus_two_thirds_up() -> f64 {
    let x = 2f64.powf(-2.0 / 3.0);
    // x³ ≥ 1/4 exactly in dyadic arithmetic, otherwise step up
    let mut y = x;
    loop {
        let d = Dyadic::from_f64(y).unwrap();
        if d.powi(3) >= Dyadic::pow2(-2) {
            return y;
        }
        y = y.next_up();
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub x1: f64,
    pub x0: f64,
    pub delta: f64,
    pub samples: usize,
    pub violations: Vec<f64>,
    pub ok: bool,
}

/// Checks `f(x) < δ − δ(x − x1)` on a grid of `[x1, x0]` for every completion
/// of `prefix` (coefficients from degree 0).
pub fn decay_check(
    prefix: &[i8],
    certificate: &TransversalityOutcome,
    x1: f64,
    x0: f64,
    samples: usize,
) -> Result<DecayReport, Error> {
    let class = certificate.class;
    let delta = certificate.delta;
    if certificate.status != Status::Certified {
        return Err(Error::Precondition("certificate is not CERTIFIED".into()));
    }
    if !(0.0 <= x1 && x1 <= x0 && x0 <= certificate.x0) {
        return Err(Error::Precondition(format!("need 0 ≤ x1 ≤ x0 ≤ {}", certificate.x0)));
    }
    if prefix.first() != Some(&1) {
        return Err(Error::Precondition("constant coefficient must be 1".into()));
    }
    for (n, &a) in prefix.iter().enumerate().skip(1) {
        if a != 0 && !class.admits(n) {
            return Err(Error::Precondition(format!("coefficient of x^{n} must vanish in class {}", class.name())));
        }
        if !(-1..=1).contains(&a) {
            return Err(Error::Precondition("coefficients must lie in {-1, 0, 1}".into()));
        }
    }
    let k = prefix.len() - 1;
    let upper = |x: f64| -> f64 {
        let xi = F64Interval::point(x);
        let mut f = F64Interval::ZERO;
        for &a in prefix.iter().rev() {
            f = f.mul(xi).add(F64Interval::point(a as f64));
        }
        let (t, _) = tail_upper(class, k, x);
        f.add(F64Interval::point(t)).hi
    };
    if upper(x1) >= delta {
        return Err(Error::Precondition(format!("f(x1) < δ does not hold for every completion at x1 = {x1}")));
    }
    let n = if x1 == x0 { 1 } else { samples.max(2) };
    let mut violations = Vec::new();
    for i in 0..n {
        let x = if n == 1 { x1 } else { x1 + (x0 - x1) * i as f64 / (n - 1) as f64 };
        let bound = F64Interval::point(delta).sub(F64Interval::point(delta).mul(F64Interval::point(x).sub(F64Interval::point(x1)))).lo;
        if upper(x) >= bound {
            violations.push(x);
        }
    }
    Ok(DecayReport { x1, x0, delta, samples: n, ok: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_membership() {
        assert_eq!(SeriesClass::Skip(1).indices(6), vec![2, 3, 5, 6, 8, 9]);
        assert_eq!(SeriesClass::Skip(2).indices(6), vec![1, 3, 4, 6, 7, 9]);
        assert_eq!(SeriesClass::Full.indices(3), vec![1, 2, 3]);
    }

    #[test]
    fn full_tail_is_geometric() {
        for (k, x) in [(0usize, 0.5f64), (3, 0.6), (10, 0.7)] {
            let (t, _) = class_tail_bound(SeriesClass::Full, k, x).unwrap();
            let exact = x.powi(k as i32 + 1) / (1.0 - x);
            assert!(t.hi >= exact && t.hi - exact < 1e-14);
        }
    }

    #[test]
    fn skip_tail_matches_truncated_sum() {
        for class in [SeriesClass::Skip(1), SeriesClass::Skip(2)] {
            for k in [0usize, 1, 2, 5] {
                let x: f64 = 0.5;
                let direct: f64 = (k + 1..=k + 60).filter(|&n| class.admits(n)).map(|n| x.powi(n as i32)).sum();
                let ddirect: f64 = (k + 1..=k + 60).filter(|&n| class.admits(n)).map(|n| n as f64 * x.powi(n as i32 - 1)).sum();
                let (t, d) = class_tail_bound(class, k, x).unwrap();
                assert!((t.hi - direct).abs() < 1e-14 && t.hi >= direct - 1e-16, "{class:?} k={k}");
                assert!((d.hi - ddirect).abs() < 1e-12, "{class:?} k={k}");
            }
        }
    }

    #[test]
    fn tail_vanishes() {
        let (t, d) = class_tail_bound(SeriesClass::Skip(2), 400, 0.7).unwrap();
        assert!(t.hi < 1e-60 && d.hi < 1e-55);
        assert!(class_tail_bound(SeriesClass::Full, 1, 1.0).is_err());
    }

    #[test]
    fn envelope_certifies_at_root() {
        let out = certify(SeriesClass::Full, 0.45, 0.1, &Budget::default()).unwrap();
        assert_eq!(out.status, Status::Certified);
        assert_eq!(out.stats.nodes, 1);
        assert_eq!(out.stats.max_prefix, 0);
    }

    #[test]
    fn counterexample_beyond_inverse_sqrt_two() {
        let out = certify(SeriesClass::Full, 0.71, 0.01, &Budget::default()).unwrap();
        assert_eq!(out.status, Status::Counterexample);
        let w = out.witness.unwrap();
        assert!(w.verified);
        assert!(verify_witness(&w.coeffs, w.x, 0.01));
        assert!(w.x <= 0.71);
    }

    #[test]
    fn x0_rounds_up() {
        let x = two_pow_minus_two_thirds_up();
        assert!((x - 0.6299605249474366).abs() < 1e-15);
        assert!(Dyadic::from_f64(x).unwrap().powi(3) >= Dyadic::pow2(-2));
    }

    #[test]
    fn domain_checks() {
        assert!(certify(SeriesClass::Full, 1.0, 0.1, &Budget::default()).is_err());
        assert!(certify(SeriesClass::Full, 0.5, 0.0, &Budget::default()).is_err());
        assert!(certify(SeriesClass::Skip(3), 0.5, 0.1, &Budget::default()).is_err());
    }
}
