use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact binary fraction `mant * 2^exp`.
///
/// The mantissa is kept odd (or the value is zero with `exp == 0`), so two
/// dyadics are equal iff their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.mant.is_positive() {
            1
        } else if self.mant.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    pub fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Round toward −∞ keeping at most `prec` significant bits.
    pub fn floor_to(&self, prec: u32) -> Self {
        let b = self.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let drop = b - prec as u64;
        // BigInt >> rounds toward −∞.
        Dyadic::new(&self.mant >> drop, self.exp + drop as i64)
    }

    /// Round toward +∞ keeping at most `prec` significant bits.
    pub fn ceil_to(&self, prec: u32) -> Self {
        -((-self).floor_to(prec))
    }

    /// Largest integer `<= self`.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            &self.mant >> ((-self.exp) as u64)
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -((-self).floor_int())
    }

    /// Round a rational toward −∞ at `prec` significant bits (at least).
    pub fn from_rational_floor(r: &BigRational, prec: u32) -> Self {
        Self::div_round(r.numer(), r.denom(), prec, false)
    }

    pub fn from_rational_ceil(r: &BigRational, prec: u32) -> Self {
        Self::div_round(r.numer(), r.denom(), prec, true)
    }

    fn div_round(num: &BigInt, den: &BigInt, prec: u32, up: bool) -> Self {
        if num.is_zero() {
            return Dyadic::zero();
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        // choose s so that num * 2^s / den has about prec + 2 bits
        let s = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let (n, d) = if s >= 0 {
            (num << (s as u64), den)
        } else {
            (num, den << ((-s) as u64))
        };
        let q = if up { n.div_ceil(&d) } else { n.div_floor(&d) };
        Dyadic::new(q, -s)
    }

    /// `self / other` rounded toward −∞ (or +∞ when `up`).
    pub fn div_directed(&self, other: &Dyadic, prec: u32, up: bool) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let q = Self::div_round(&self.mant, &other.mant, prec, up);
        q.mul_pow2(self.exp - other.exp)
    }

    /// Floor/ceil of the square root with about `prec` significant bits.
    pub fn sqrt_directed(&self, prec: u32, up: bool) -> Self {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let e = self.exp;
        let b = self.bits() as i64;
        let want = b + e - 2 * (prec as i64) - 4;
        let k = Integer::div_floor(&e, &2).min(Integer::div_floor(&want, &2));
        let shifted = &self.mant << ((e - 2 * k) as u64);
        let mut y = shifted.sqrt();
        if up && &y * &y < shifted {
            y += 1;
        }
        Dyadic::new(y, k)
    }

    /// Nearest-ish f64 (truncation to 53 bits, then exact scaling).
    pub fn to_f64(&self) -> f64 {
        let r = self.floor_to(53);
        let m = r.mant.to_f64().unwrap_or(0.0);
        scale_f64(m, r.exp)
    }

    /// Largest f64 `<= self`.
    pub fn to_f64_down(&self) -> f64 {
        let mut c = self.to_f64();
        loop {
            match Dyadic::from_f64(c) {
                Some(d) if d <= *self => return c,
                _ => c = c.next_down(),
            }
        }
    }

    /// Smallest f64 `>= self`.
    pub fn to_f64_up(&self) -> f64 {
        let mut c = self.to_f64();
        loop {
            match Dyadic::from_f64(c) {
                Some(d) if d >= *self => return c,
                _ => c = c.next_up(),
            }
        }
    }

    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).mul_pow2(-1)
    }

    pub fn powi(&self, n: u32) -> Dyadic {
        Dyadic { mant: num_traits::pow(self.mant.clone(), n as usize), exp: self.exp * n as i64 }
    }
}

fn scale_f64(mut m: f64, mut e: i64) -> f64 {
    while e > 0 {
        let step = e.min(1000);
        m *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        m /= 2f64.powi(step as i32);
        e += step;
    }
    m
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s1 = self.signum();
        let s2 = other.signum();
        if s1 != s2 {
            return s1.cmp(&s2);
        }
        if s1 == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes by top bit first
        let t1 = self.top();
        let t2 = other.top();
        let mag = if t1 != t2 {
            t1.cmp(&t2)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.abs() << ((self.exp - e) as u64);
            let b = other.mant.abs() << ((other.exp - e) as u64);
            a.cmp(&b)
        };
        if s1 > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{:?}", self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn normalizes_and_compares() {
        assert_eq!(Dyadic::new(BigInt::from(12), 0), Dyadic::new(BigInt::from(3), 2));
        assert!(d(0.5) < d(0.75));
        assert!(d(-0.5) > d(-0.75));
        assert!(d(-1.0) < d(0.0));
        assert_eq!(d(0.1).to_f64(), 0.1);
    }

    #[test]
    fn shift_floors_negative_values() {
        let x = Dyadic::new(BigInt::from(-7), 0);
        assert_eq!(x.floor_to(2), Dyadic::from_int(-8));
        assert_eq!(x.ceil_to(2), Dyadic::from_int(-6));
        assert_eq!(Dyadic::from_int(7).floor_to(2), Dyadic::from_int(6));
    }

    #[test]
    fn directed_division_brackets_one_third() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div_directed(&three, 64, false);
        let hi = one.div_directed(&three, 64, true);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!((&hi - &lo).top() < -60);
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt_directed(80, false);
        let hi = two.sqrt_directed(80, true);
        assert!(&lo * &lo <= two && two <= &hi * &hi);
        assert!((&hi - &lo).top() < -75);
        let four = Dyadic::from_int(4);
        assert_eq!(four.sqrt_directed(10, true), Dyadic::from_int(2));
    }

    #[test]
    fn f64_directed_conversion() {
        let third = Dyadic::from_rational_floor(&BigRational::new(1.into(), 3.into()), 100);
        let lo = third.to_f64_down();
        let hi = third.to_f64_up();
        assert!(lo < hi);
        assert_eq!(hi, lo.next_up());
    }
}
