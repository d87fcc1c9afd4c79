//! Hardware-float intervals with exact outward rounding.
//!
//! Each operation computes the rounded result together with its exact error
//! term (TwoSum / FMA), and only widens an endpoint by one ulp when the result
//! was actually inexact. Exact computations, such as sums of dyadic powers,
//! therefore stay point intervals.

use super::dyadic::Dyadic;
use super::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F64Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bp = s - a;
    let e = (a - (s - bp)) + (b - bp);
    (s, e)
}

#[inline]
fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    if e < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    if e > 0.0 {
        p.next_up()
    } else {
        p
    }
}

#[inline]
fn div_dir(a: f64, b: f64, up: bool) -> f64 {
    let q = a / b;
    // a - q*b exactly; its sign relative to b tells which side the true value lies
    let r = (-q).mul_add(b, a);
    let above = (r > 0.0) == (b > 0.0) && r != 0.0;
    let below = r != 0.0 && !above;
    if up && above {
        q.next_up()
    } else if !up && below {
        q.next_down()
    } else {
        q
    }
}

impl F64Interval {
    pub const ZERO: F64Interval = F64Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: F64Interval = F64Interval { lo: 1.0, hi: 1.0 };

    #[inline]
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "bad interval [{lo}, {hi}]");
        F64Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: f64) -> Self {
        F64Interval { lo: x, hi: x }
    }

    /// Outward f64 rounding of a dyadic enclosure.
    pub fn from_interval(i: &Interval) -> Self {
        F64Interval { lo: i.lo_f64(), hi: i.hi_f64() }
    }

    pub fn to_interval(self) -> Interval {
        Interval::from_f64_bounds(self.lo, self.hi)
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        F64Interval { lo: add_down(self.lo, o.lo), hi: add_up(self.hi, o.hi) }
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        F64Interval { lo: add_down(self.lo, -o.hi), hi: add_up(self.hi, -o.lo) }
    }

    #[inline]
    pub fn neg(self) -> Self {
        F64Interval { lo: -self.hi, hi: -self.lo }
    }

    #[inline]
    pub fn mul(self, o: Self) -> Self {
        if self.lo >= 0.0 && o.lo >= 0.0 {
            return F64Interval { lo: mul_down(self.lo, o.lo), hi: mul_up(self.hi, o.hi) };
        }
        let lo = mul_down(self.lo, o.lo)
            .min(mul_down(self.lo, o.hi))
            .min(mul_down(self.hi, o.lo))
            .min(mul_down(self.hi, o.hi));
        let hi = mul_up(self.lo, o.lo)
            .max(mul_up(self.lo, o.hi))
            .max(mul_up(self.hi, o.lo))
            .max(mul_up(self.hi, o.hi));
        F64Interval { lo, hi }
    }

    #[inline]
    pub fn scale(self, k: f64) -> Self {
        self.mul(F64Interval::point(k))
    }

    /// Division by an interval not containing zero.
    pub fn div(self, o: Self) -> Self {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        let c = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)];
        let lo = c.iter().map(|&(a, b)| div_dir(a, b, false)).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|&(a, b)| div_dir(a, b, true)).fold(f64::NEG_INFINITY, f64::max);
        F64Interval { lo, hi }
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = F64Interval::ONE;
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            F64Interval { lo: 0.0, hi: self.hi.max(-self.lo) }
        }
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    #[inline]
    pub fn width(self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    #[inline]
    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn hull(self, o: Self) -> Self {
        F64Interval { lo: self.lo.min(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn is_exact_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn lo_dyadic(self) -> Dyadic {
        Dyadic::from_f64(self.lo).expect("finite")
    }
}
