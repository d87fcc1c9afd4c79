use std::cmp::Ordering;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::numeric::{AlgebraicNumber, Dyadic, F64Interval, IntPolynomial, Interval};

/// Coefficient vectors in `{−1, 0, 1}^{n+1}`, optionally with forced zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoeffClass {
    Full,
    /// Coefficient 0 at every `n` with `3 | n − 2`.
    QTrimmed,
}

impl CoeffClass {
    pub fn allows(self, n: usize) -> bool {
        match self {
            CoeffClass::Full => true,
            CoeffClass::QTrimmed => n % 3 != 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Pruned,
    Exhaustive,
}

/// Interval arithmetic the search can run on.
pub trait Scalar: Clone + Send + Sync {
    fn from_interval(x: &Interval) -> Self;
    fn to_interval(&self) -> Interval;
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn abs(&self) -> Self;
    fn contains_zero(&self) -> bool;
    fn lo_gt_hi(&self, o: &Self) -> bool;
    fn cmp_hi(&self, o: &Self) -> Ordering;
    /// `[0, x.hi^k / (1 − x.hi)]` for `0 ≤ x < 1`.
    fn geometric_tail(&self, k: u32) -> Self;
}

impl Scalar for F64Interval {
    fn from_interval(x: &Interval) -> Self {
        F64Interval::from_interval(x)
    }
    fn to_interval(&self) -> Interval {
        F64Interval::to_interval(*self)
    }
    fn zero_like(&self) -> Self {
        F64Interval::ZERO
    }
    fn add(&self, o: &Self) -> Self {
        F64Interval::add(*self, *o)
    }
    fn sub(&self, o: &Self) -> Self {
        F64Interval::sub(*self, *o)
    }
    fn mul(&self, o: &Self) -> Self {
        F64Interval::mul(*self, *o)
    }
    fn abs(&self) -> Self {
        F64Interval::abs(*self)
    }
    fn contains_zero(&self) -> bool {
        F64Interval::contains_zero(*self)
    }
    fn lo_gt_hi(&self, o: &Self) -> bool {
        self.lo > o.hi
    }
    fn cmp_hi(&self, o: &Self) -> Ordering {
        self.hi.total_cmp(&o.hi)
    }
    fn geometric_tail(&self, k: u32) -> Self {
        let x = F64Interval::point(self.hi);
        let t = x.powi(k).div(F64Interval::ONE.sub(x));
        F64Interval::new(0.0, t.hi)
    }
}

impl Scalar for Interval {
    fn from_interval(x: &Interval) -> Self {
        x.clone()
    }
    fn to_interval(&self) -> Interval {
        self.clone()
    }
    fn zero_like(&self) -> Self {
        Interval::zero(self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        Interval::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Interval::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Interval::mul(self, o)
    }
    fn abs(&self) -> Self {
        Interval::abs(self)
    }
    fn contains_zero(&self) -> bool {
        Interval::contains_zero(self)
    }
    fn lo_gt_hi(&self, o: &Self) -> bool {
        self.lo() > o.hi()
    }
    fn cmp_hi(&self, o: &Self) -> Ordering {
        self.hi().cmp(o.hi())
    }
    fn geometric_tail(&self, k: u32) -> Self {
        let p = self.prec();
        let x = Interval::point(self.hi().clone(), p);
        let t = x.powi(k).div(&Interval::one(p).sub(&x)).expect("x < 1");
        Interval::new(Dyadic::zero(), t.hi().clone(), p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub min_value: Interval,
    #[serde(serialize_with = "coeffs_ser")]
    pub argmin: IntPolynomial,
    pub nodes: u64,
    pub mode: Mode,
    pub class: CoeffClass,
    pub n: usize,
    /// Some polynomial vanishing exactly at λ was skipped.
    pub excluded_zero: bool,
}

fn coeffs_ser<S: Serializer>(p: &IntPolynomial, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

struct Best<S> {
    value: S,
    coeffs: Vec<i8>,
}

impl<S: Scalar> Best<S> {
    fn beats(&self, other: &Best<S>) -> bool {
        match self.value.cmp_hi(&other.value) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.coeffs < other.coeffs,
        }
    }
}

struct Ctx<'a, S> {
    powers: Vec<S>,
    tails: Vec<S>,
    n: usize,
    class: CoeffClass,
    prune: bool,
    exclude: Option<&'a AlgebraicNumber>,
}

struct Local<S> {
    best: Best<S>,
    nodes: u64,
    excluded: bool,
}

fn to_poly(c: &[i8]) -> IntPolynomial {
    IntPolynomial::new(c.iter().map(|&a| BigInt::from(a)).collect())
}

fn leading_positive(p: IntPolynomial) -> IntPolynomial {
    if p.leading().sign() == num_bigint::Sign::Minus {
        p.neg()
    } else {
        p
    }
}

fn choices(class: CoeffClass, j: usize, leading_zero: bool) -> &'static [i8] {
    if !class.allows(j) {
        &[0]
    } else if leading_zero {
        // fixes the sign: the first nonzero coefficient is +1
        &[0, 1]
    } else {
        &[-1, 0, 1]
    }
}

impl<S: Scalar> Ctx<'_, S> {
    fn step(&self, s: &S, j: usize, a: i8) -> S {
        match a {
            1 => s.add(&self.powers[j]),
            -1 => s.sub(&self.powers[j]),
            _ => s.clone(),
        }
    }

    fn leaf(&self, coeffs: &[i8], s: &S, out: &mut Local<S>) {
        if coeffs.iter().all(|&a| a == 0) {
            return;
        }
        let v = s.abs();
        if v.contains_zero() {
            if let Some(xi) = self.exclude {
                if xi.is_root_of(&to_poly(coeffs)) {
                    out.excluded = true;
                    return;
                }
            }
        }
        let cand = Best { value: v, coeffs: coeffs.to_vec() };
        if cand.beats(&out.best) {
            out.best = cand;
        }
    }

    fn dfs(&self, coeffs: &mut Vec<i8>, s: &S, out: &mut Local<S>) {
        out.nodes += 1;
        let j = coeffs.len();
        if j == self.n + 1 {
            self.leaf(coeffs, s, out);
            return;
        }
        // no completion can come back below the incumbent
        if self.prune && j > 0 && s.abs().sub(&self.tails[j]).lo_gt_hi(&out.best.value) {
            return;
        }
        let lz = coeffs.iter().all(|&a| a == 0);
        for &a in choices(self.class, j, lz) {
            coeffs.push(a);
            let next = self.step(s, j, a);
            self.dfs(coeffs, &next, out);
            coeffs.pop();
        }
    }

    /// Greedy member used as the initial incumbent.
    fn seed(&self) -> Best<S> {
        let mut c = vec![1i8];
        let mut s = self.powers[0].clone();
        for j in 1..=self.n {
            let mut pick = (0i8, s.clone());
            for &a in choices(self.class, j, false) {
                let t = self.step(&s, j, a);
                if t.abs().cmp_hi(&pick.1.abs()) == Ordering::Less {
                    pick = (a, t);
                }
            }
            c.push(pick.0);
            s = pick.1;
        }
        let v = s.abs();
        let zero_at_xi = v.contains_zero() && self.exclude.is_some_and(|xi| xi.is_root_of(&to_poly(&c)));
        if zero_at_xi {
            let mut one = vec![0i8; self.n + 1];
            one[0] = 1;
            return Best { value: self.powers[0].abs(), coeffs: one };
        }
        Best { value: v, coeffs: c }
    }
}

/// Minimum of `|P(λ)|` over nonzero class members of degree at most `n`,
/// optionally skipping every `P` with `P(ξ) = 0` exactly.
pub fn min_abs_value_with<S: Scalar>(
    lambda: &S,
    n: usize,
    class: CoeffClass,
    mode: Mode,
    exclude: Option<&AlgebraicNumber>,
) -> Result<SearchResult, Error> {
    let li = lambda.to_interval();
    if !(li.lo().signum() > 0 && li.hi() < &Dyadic::one()) {
        return Err(Error::Domain(format!("lambda must lie in (0, 1), got {li}")));
    }
    if !class.allows(0) {
        return Err(Error::Domain("empty coefficient class".into()));
    }
    if mode == Mode::Exhaustive && n > 16 {
        return Err(Error::Precondition(format!("exhaustive search is limited to n ≤ 16, got {n}")));
    }
    let mut powers = Vec::with_capacity(n + 1);
    let mut p: S = Scalar::from_interval(&Interval::one(li.prec()));
    for _ in 0..=n {
        powers.push(p.clone());
        p = Scalar::mul(&p, lambda);
    }
    let tails = (0..=n + 1).map(|j| lambda.geometric_tail(j as u32)).collect();
    let ctx = Ctx { powers, tails, n, class, prune: mode == Mode::Pruned, exclude };
    let seed = ctx.seed();

    // independent subtrees below a short prefix, each with the same seed
    let split = (n + 1).min(4);
    let mut prefixes: Vec<(Vec<i8>, S)> = vec![(Vec::new(), ctx.powers[0].zero_like())];
    for j in 0..split {
        let mut next = Vec::new();
        for (c, s) in prefixes {
            let lz = c.iter().all(|&a| a == 0);
            for &a in choices(class, j, lz) {
                let mut c2 = c.clone();
                c2.push(a);
                let s2 = ctx.step(&s, j, a);
                next.push((c2, s2));
            }
        }
        prefixes = next;
    }
    // nodes above the split level, counted once
    let head_nodes: u64 = {
        let mut count = 1u64;
        let mut level: Vec<Vec<i8>> = vec![Vec::new()];
        for j in 0..split.saturating_sub(1) {
            let mut next = Vec::new();
            for c in level {
                let lz = c.iter().all(|&a| a == 0);
                for &a in choices(class, j, lz) {
                    let mut c2 = c.clone();
                    c2.push(a);
                    next.push(c2);
                }
            }
            count += next.len() as u64;
            level = next;
        }
        count
    };
    let locals: Vec<Local<S>> = prefixes
        .into_par_iter()
        .map(|(mut c, s)| {
            let mut out =
                Local { best: Best { value: seed.value.clone(), coeffs: seed.coeffs.clone() }, nodes: 0, excluded: false };
            ctx.dfs(&mut c, &s, &mut out);
            out
        })
        .collect();
    let mut best = seed;
    let mut nodes = head_nodes;
    let mut excluded = false;
    for l in locals {
        nodes += l.nodes;
        excluded |= l.excluded;
        if l.best.beats(&best) {
            best = l.best;
        }
    }
    Ok(SearchResult {
        min_value: best.value.to_interval(),
        argmin: leading_positive(to_poly(&best.coeffs)),
        nodes,
        mode,
        class,
        n,
        excluded_zero: excluded,
    })
}

/// [`min_abs_value_with`] on hardware intervals, outward-rounded from `lambda`.
pub fn min_abs_value(lambda: &Interval, n: usize, class: CoeffClass, mode: Mode) -> Result<SearchResult, Error> {
    min_abs_value_with(&F64Interval::from_interval(lambda), n, class, mode, None)
}

/// Minimum of `|P(ξ)|` over class members with `P(ξ) ≠ 0`.
pub fn min_nonzero_abs_value(xi: &AlgebraicNumber, n: usize, class: CoeffClass, mode: Mode) -> Result<SearchResult, Error> {
    let e = F64Interval::from_interval(&xi.enclosure(64));
    min_abs_value_with(&e, n, class, mode, Some(xi))
}
