use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::dyadic::Dyadic;

/// Closed interval with dyadic endpoints.
///
/// Every operation rounds its endpoints outward to `prec` significant bits,
/// so the result always contains the exact value of the operation applied to
/// any points of the operands.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

pub const DEFAULT_PREC: u32 = 128;

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval { lo: lo.floor_to(prec), hi: hi.ceil_to(prec), prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval::new(x.clone(), x, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(n), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Interval::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Interval::point(Dyadic::one(), prec)
    }

    /// Tightest `prec`-bit enclosure of a rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational_floor(r, prec),
            hi: Dyadic::from_rational_ceil(r, prec),
            prec,
        }
    }

    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        assert!(lo <= hi);
        Interval {
            lo: Dyadic::from_rational_floor(lo, prec),
            hi: Dyadic::from_rational_ceil(hi, prec),
            prec,
        }
    }

    /// Exact enclosure of `[lo, hi]` given as f64 values.
    pub fn from_f64_bounds(lo: f64, hi: f64) -> Self {
        let lo = Dyadic::from_f64(lo).expect("finite lower bound");
        let hi = Dyadic::from_f64(hi).expect("finite upper bound");
        Interval::new(lo, hi, 64)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_down()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_up()
    }

    pub fn mid_f64(&self) -> f64 {
        Dyadic::midpoint(&self.lo, &self.hi).to_f64()
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_up()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        &self.lo.to_rational() <= x && x <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo <= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi >= other.hi { &self.hi } else { &other.hi };
        Interval::new(lo.clone(), hi.clone(), self.prec.max(other.prec))
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    fn join_prec(&self, other: &Interval) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi, self.join_prec(other))
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo, self.join_prec(other))
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Interval::new(lo, hi, self.join_prec(other))
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        self.mul(&Interval::from_int(k, self.prec))
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        a.mul(&a)
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let hi = if -&self.lo > self.hi { -&self.lo } else { self.hi.clone() };
            Interval { lo: Dyadic::zero(), hi, prec: self.prec }
        }
    }

    /// Division; `None` when the divisor contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let prec = self.join_prec(other);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let l = a.div_directed(b, prec, false);
                let h = a.div_directed(b, prec, true);
                if lo.as_ref().map_or(true, |x| &l < x) {
                    lo = Some(l);
                }
                if hi.as_ref().map_or(true, |x| &h > x) {
                    hi = Some(h);
                }
            }
        }
        Some(Interval::new(lo.unwrap(), hi.unwrap(), prec))
    }

    pub fn recip(&self) -> Option<Interval> {
        Interval::one(self.prec).div(self)
    }

    pub fn div_int(&self, k: i64) -> Interval {
        self.div(&Interval::from_int(k, self.prec)).expect("nonzero integer divisor")
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut acc = Interval::one(self.prec);
        let mut base = self.clone();
        let mut e = n;
        // odd powers keep the sign structure; even powers are nonnegative
        if n % 2 == 0 {
            base = base.abs();
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Interval {
        assert!(self.hi.signum() >= 0, "square root of a negative interval");
        let lo = if self.lo.signum() <= 0 {
            Dyadic::zero()
        } else {
            self.lo.sqrt_directed(self.prec, false)
        };
        let hi = self.hi.sqrt_directed(self.prec, true);
        Interval::new(lo, hi, self.prec)
    }

    pub fn min(&self, other: &Interval) -> Interval {
        let lo = if self.lo <= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        Interval::new(lo.clone(), hi.clone(), self.join_prec(other))
    }

    pub fn max(&self, other: &Interval) -> Interval {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi >= other.hi { &self.hi } else { &other.hi };
        Interval::new(lo.clone(), hi.clone(), self.join_prec(other))
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Interval> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_point(&self.lo, self.prec);
        let hi = if self.is_point() { lo.clone() } else { ln_point(&self.hi, self.prec) };
        Some(Interval::new(lo.lo, hi.hi, self.prec))
    }

    /// Base-2 logarithm; exact for powers of two.
    pub fn log2(&self) -> Option<Interval> {
        if !self.is_positive() {
            return None;
        }
        let lo = log2_point(&self.lo, self.prec);
        let hi = if self.is_point() { lo.clone() } else { log2_point(&self.hi, self.prec) };
        Some(Interval::new(lo.lo, hi.hi, self.prec))
    }
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    let w = prec + 16;
    let third = Interval::one(w).div_int(3);
    atanh_small(&third, w).mul_int(2).with_prec(prec)
}

/// `x = m * 2^e` with `m ∈ [1, 2)`.
fn split_binary(x: &Dyadic) -> (Dyadic, i64) {
    let top = x.top();
    (x.mul_pow2(1 - top), top - 1)
}

/// `atanh(y)` for `0 <= y <= 1/3` (interval `y`) by its Taylor series plus a
/// geometric bound on the remainder.
fn atanh_small(y: &Interval, w: u32) -> Interval {
    let y2 = y.sqr();
    let mut term = y.clone();
    let mut sum = Interval::zero(w);
    let eps = Dyadic::pow2(-(w as i64) - 4);
    let mut k: i64 = 0;
    loop {
        sum = sum.add(&term.div_int(2 * k + 1));
        term = term.mul(&y2);
        k += 1;
        if term.hi <= eps {
            break;
        }
    }
    // remaining terms y^(2k+1)/(2k+1) + ... <= term / (1 - y^2) <= 9/8 term
    let rest_hi = term.hi.mul_pow2(1);
    sum.add(&Interval::new(Dyadic::zero(), rest_hi, w))
}

fn ln_mantissa(m: &Dyadic, w: u32) -> Interval {
    if *m == Dyadic::one() {
        return Interval::zero(w);
    }
    let mi = Interval::point(m.clone(), w);
    let one = Interval::one(w);
    let y = mi.sub(&one).div(&mi.add(&one)).expect("positive denominator");
    atanh_small(&y, w).mul_int(2)
}

fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    let w = prec + 16;
    let (m, e) = split_binary(x);
    let mut r = ln_mantissa(&m, w);
    if e != 0 {
        r = r.add(&ln2(w).mul_int(e));
    }
    r.with_prec(prec)
}

fn log2_point(x: &Dyadic, prec: u32) -> Interval {
    let w = prec + 16;
    let (m, e) = split_binary(x);
    let mut r = Interval::from_int(e, w);
    if m != Dyadic::one() {
        let frac = ln_mantissa(&m, w).div(&ln2(w)).expect("ln 2 > 0");
        r = r.add(&frac);
    }
    r.with_prec(prec)
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_f64(), self.hi_f64())
    }
}

/// Serialized as `[lo, hi]`, each rounded outward to f64.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.lo_f64())?;
        seq.serialize_element(&self.hi_f64())?;
        seq.end()
    }
}

impl From<&BigRational> for Interval {
    fn from(r: &BigRational) -> Self {
        Interval::from_rational(r, DEFAULT_PREC)
    }
}
