use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::dyadic::Dyadic;
use super::interval::Interval;
use crate::error::Error;

/// Polynomial with exact integer coefficients in ascending degree.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        IntPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn x_pow(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPolynomial { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }

    /// `x^deg * P(1/x)`.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPolynomial::new(c)
    }

    /// Splits `P = x^k * Q` with `Q(0) != 0`.
    pub fn strip_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, IntPolynomial::new(self.coeffs[k..].to_vec()))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact value at a dyadic point.
    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Dyadic::from_int(c.clone());
        }
        acc
    }

    /// Sign of `P(x)` at a dyadic point, computed in integers.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        self.eval_dyadic(x).signum()
    }

    /// Horner evaluation in interval arithmetic.
    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let prec = x.prec();
        let mut acc = Interval::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Interval::from_int(c.clone(), prec));
        }
        acc
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Primitive integer polynomial with the same roots as a rational one,
    /// scaled by a positive factor (signs are preserved).
    pub fn from_rat_positive(p: &RatPoly) -> Self {
        if p.is_zero() {
            return IntPolynomial::zero();
        }
        let den = p.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let q = IntPolynomial::new(ints);
        let g = q.content();
        IntPolynomial::new(q.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let g = self.to_rat().gcd(&o.to_rat());
        IntPolynomial::from_rat_positive(&g).primitive_part()
    }

    /// `P / gcd(P, P')` made primitive: same roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.to_rat().div_rem(&g.to_rat());
        IntPolynomial::from_rat_positive(&q).primitive_part()
    }

    /// Yun's decomposition: primitive squarefree `s_k` with
    /// `P = c * Π s_k^k` (entries `(s_k, k)` with `deg s_k > 0`).
    pub fn squarefree_decomposition(&self) -> Vec<(IntPolynomial, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.to_rat();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1u32;
        while b.degree() > 0 {
            a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((IntPolynomial::from_rat_positive(&a).primitive_part(), k));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Comma-separated integers in ascending degree: `"-1,1,1"` is `x^2 + x - 1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad polynomial coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Dense polynomial over Q, ascending degree, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    pub(crate) coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatPoly::new(vec![]);
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }

    pub fn derivative(&self) -> Self {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.coeffs.last().unwrap().clone();
        if r.len() < d.coeffs.len() {
            return (RatPoly::new(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => RatPoly::new(self.coeffs.iter().map(|c| c / l).collect()),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            // keep coefficient growth in check
            b = if r.is_zero() { r } else { IntPolynomial::from_rat_positive(&r).to_rat() };
        }
        a.monic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn parses_ascending_comma_format() {
        let q: IntPolynomial = "-1,1,1".parse().unwrap();
        assert_eq!(q, p(&[-1, 1, 1]));
        assert_eq!(q.degree(), 2);
        assert_eq!(q.to_string(), "-1,1,1");
        assert_eq!("0,0,0".parse::<IntPolynomial>().unwrap(), IntPolynomial::zero());
        assert!("1,x".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn degree_matches_last_nonzero() {
        let q = IntPolynomial::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), 1);
        assert_eq!(q.leading(), BigInt::from(2));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1, 1]);
        let b = p(&[1, 1]);
        let sq = a.mul(&a).mul(&b);
        assert_eq!(sq.squarefree_part(), a.mul(&b).primitive_part());
        assert_eq!(sq.gcd(&a), a);
        let dec = sq.squarefree_decomposition();
        assert_eq!(dec, vec![(b.clone(), 1), (a.clone(), 2)]);
    }

    #[test]
    fn decomposition_of_squarefree_input() {
        let a = p(&[-1, 1, 1]);
        assert_eq!(a.squarefree_decomposition(), vec![(a.clone(), 1)]);
        let cube = p(&[-1, 2]).mul(&p(&[-1, 2])).mul(&p(&[-1, 2]));
        assert_eq!(cube.squarefree_decomposition(), vec![(p(&[-1, 2]), 3)]);
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, 0, -2, 5, 1]).to_rat();
        let b = p(&[1, 2, 3]).to_rat();
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }
}
