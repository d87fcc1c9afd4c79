use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::dyadic::Dyadic;
use super::interval::Interval;
use super::mahler::mahler_measure;
use super::poly::IntPolynomial;
use super::sturm::{isolate_cells, refine_disjoint, root_bound, RootCell, SturmChain};
use crate::error::Error;

/// A real root of a primitive squarefree integer polynomial, pinned down by
/// an isolating interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    defining: IntPolynomial,
    cell: RootCell,
}

fn closed_count(chain: &SturmChain, a: &Dyadic, b: &Dyadic) -> usize {
    let at_a = usize::from(chain.poly().sign_at(a) == 0);
    if a == b {
        return at_a;
    }
    chain.count(a, b) + at_a
}

impl AlgebraicNumber {
    /// The root of `p` inside `isolator`, which must hold exactly one root.
    pub fn new(p: &IntPolynomial, isolator: &Interval) -> Result<Self, Error> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if p.degree() == 0 {
            return Err(Error::Domain("constant polynomial has no roots".into()));
        }
        let defining = p.squarefree_part();
        let chain = SturmChain::new(&defining);
        let (lo, hi) = (isolator.lo().clone(), isolator.hi().clone());
        let n = closed_count(&chain, &lo, &hi);
        if n != 1 {
            return Err(Error::Domain(format!("isolator contains {n} roots, expected exactly one")));
        }
        let cell = if defining.sign_at(&lo) == 0 {
            RootCell { lo: lo.clone(), hi: lo }
        } else if defining.sign_at(&hi) == 0 {
            RootCell { lo: hi.clone(), hi }
        } else {
            RootCell { lo, hi }
        };
        Ok(AlgebraicNumber { defining, cell })
    }

    /// The unique root of `p` in the closed rational interval `[lo, hi]`.
    pub fn root_in(p: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> Result<Self, Error> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if lo > hi {
            return Err(Error::Domain("empty root window".into()));
        }
        let defining = p.squarefree_part();
        if defining.degree() == 0 {
            return Err(Error::Domain("constant polynomial has no roots".into()));
        }
        let b = root_bound(&defining);
        let mut cells = isolate_cells(&defining, &-&b, &b);
        refine_disjoint(&defining, &mut cells, &b);
        let mut found = Vec::new();
        for mut c in cells {
            let mut decided = false;
            for _ in 0..4096 {
                let (clo, chi) = (c.lo.to_rational(), c.hi.to_rational());
                if &chi < lo || &clo > hi {
                    decided = true;
                    break;
                }
                if &clo >= lo && &chi <= hi {
                    found.push(c.clone());
                    decided = true;
                    break;
                }
                if c.is_exact() {
                    break;
                }
                c.bisect(&defining);
            }
            if !decided {
                // the root sits on a non-dyadic window endpoint
                if defining.eval_rational(lo).is_zero() || defining.eval_rational(hi).is_zero() {
                    found.push(c);
                }
            }
        }
        match found.len() {
            1 => Ok(AlgebraicNumber { defining, cell: found.pop().unwrap() }),
            n => Err(Error::Domain(format!("window [{lo}, {hi}] contains {n} roots, expected exactly one"))),
        }
    }

    /// Every root of `p` in the open interval `(lo, hi)`, in increasing order.
    pub fn roots_in_open(p: &IntPolynomial, lo: &Dyadic, hi: &Dyadic) -> Result<Vec<Self>, Error> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let defining = p.squarefree_part();
        if defining.degree() == 0 {
            return Ok(Vec::new());
        }
        let mut cells = isolate_cells(&defining, lo, hi);
        refine_disjoint(&defining, &mut cells, &(hi - lo));
        Ok(cells.into_iter().map(|cell| AlgebraicNumber { defining: defining.clone(), cell }).collect())
    }

    /// Same number with the isolator shrunk to width at most `2^-bits`.
    pub fn refined(&self, bits: u32) -> Self {
        let mut c = self.cell.clone();
        c.refine_to(&self.defining, &Dyadic::pow2(-(bits as i64)));
        AlgebraicNumber { defining: self.defining.clone(), cell: c }
    }

    /// Exact equality of two real algebraic numbers.
    pub fn equals(&self, other: &AlgebraicNumber) -> bool {
        let g = self.defining.gcd(&other.defining);
        if g.degree() == 0 || !self.is_root_of(&g) || !other.is_root_of(&g) {
            return false;
        }
        let chain = SturmChain::new(&g);
        let (mut a, mut b) = (self.cell.clone(), other.cell.clone());
        loop {
            if a.hi < b.lo || b.hi < a.lo {
                return false;
            }
            let lo = if a.lo < b.lo { &a.lo } else { &b.lo }.clone();
            let hi = if a.hi > b.hi { &a.hi } else { &b.hi }.clone();
            if closed_count(&chain, &lo, &hi) == 1 {
                return true;
            }
            a.bisect(&self.defining);
            b.bisect(&other.defining);
        }
    }

    /// The same number, defined by a factor `q` of the defining polynomial
    /// that vanishes at it.
    pub fn with_factor(&self, q: &IntPolynomial) -> Result<Self, Error> {
        if !self.is_root_of(q) {
            return Err(Error::Domain("not a root of the proposed factor".into()));
        }
        AlgebraicNumber::new(q, &self.cell.to_interval())
    }

    /// A rational number `num/den` as the root of `den·x − num`.
    pub fn from_rational(r: &BigRational) -> Self {
        let p = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
        AlgebraicNumber::root_in(&p, r, r).expect("linear polynomial has one root")
    }

    pub fn defining(&self) -> &IntPolynomial {
        &self.defining
    }

    pub fn degree(&self) -> usize {
        self.defining.degree()
    }

    pub fn isolator(&self) -> Interval {
        self.cell.to_interval()
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> Interval {
        let mut c = self.cell.clone();
        c.refine_to(&self.defining, &Dyadic::pow2(-(bits as i64)));
        c.to_interval()
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(60).mid_f64()
    }

    pub fn mahler(&self, prec: u32) -> Result<Interval, Error> {
        mahler_measure(&self.defining, prec)
    }

    /// Exact test for `Q(self) = 0`: the common factor with the defining
    /// polynomial must have a root inside the isolator.
    pub fn is_root_of(&self, q: &IntPolynomial) -> bool {
        if q.is_zero() {
            return true;
        }
        let g = q.gcd(&self.defining);
        if g.degree() == 0 {
            return false;
        }
        closed_count(&SturmChain::new(&g), &self.cell.lo, &self.cell.hi) > 0
    }

    /// Sign of `Q(self)`, decided exactly.
    pub fn sign_of(&self, q: &IntPolynomial) -> i32 {
        if self.is_root_of(q) {
            return 0;
        }
        let mut c = self.cell.clone();
        let mut bits = 32u32;
        loop {
            c.refine_to(&self.defining, &Dyadic::pow2(-(bits as i64)));
            let v = q.eval_interval(&c.to_interval().with_prec(bits + 64));
            if v.is_positive() {
                return 1;
            }
            if v.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// True when the root lies in the open interval `(lo, hi)`.
    pub fn inside_open(&self, lo: &BigRational, hi: &BigRational) -> bool {
        let mut c = self.cell.clone();
        for _ in 0..4096 {
            let (clo, chi) = (c.lo.to_rational(), c.hi.to_rational());
            if &clo > lo && &chi < hi {
                return true;
            }
            if &chi <= lo || &clo >= hi {
                return false;
            }
            if c.is_exact() {
                return false;
            }
            c.bisect(&self.defining);
        }
        false
    }
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgebraicNumber", 3)?;
        st.serialize_field("defining", &self.defining)?;
        st.serialize_field("isolator", &self.isolator())?;
        st.serialize_field("degree", &self.degree())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn golden_root_in_window() {
        let g = AlgebraicNumber::root_in(&p(&[-1, 1, 1]), &q(1, 2), &q(7, 10)).unwrap();
        assert_eq!(g.degree(), 2);
        assert!((g.to_f64() - 0.6180339887498949).abs() < 1e-15);
        assert!(g.enclosure(100).width_f64() <= 2f64.powi(-100));
    }

    #[test]
    fn window_with_two_roots_rejected() {
        assert!(AlgebraicNumber::root_in(&p(&[-1, 1, 1]), &q(-2, 1), &q(1, 1)).is_err());
        assert!(AlgebraicNumber::root_in(&p(&[-1, 1, 1]), &q(7, 10), &q(1, 1)).is_err());
    }

    #[test]
    fn rational_roots() {
        let h = AlgebraicNumber::from_rational(&q(1, 2));
        assert!(h.isolator().is_point());
        let t = AlgebraicNumber::from_rational(&q(2, 3));
        assert!(t.inside_open(&q(1, 2), &q(7, 10)));
        assert!(t.is_root_of(&p(&[-2, 3])));
        assert!(t.is_root_of(&p(&[-2, 3]).mul(&p(&[1, 1, 1]))));
        assert!(!t.is_root_of(&p(&[-1, 2])));
    }

    #[test]
    fn zero_test_with_non_minimal_defining_polynomial() {
        // defining (x^2 + x - 1)(x - 3): the golden root is not a root of x - 3
        let d = p(&[-1, 1, 1]).mul(&p(&[-3, 1]));
        let g = AlgebraicNumber::root_in(&d, &q(1, 2), &q(1, 1)).unwrap();
        assert!(!g.is_root_of(&p(&[-3, 1])));
        assert!(g.is_root_of(&p(&[-1, 1, 1])));
        assert_eq!(g.sign_of(&p(&[-3, 1])), -1);
    }

    #[test]
    fn new_checks_isolator() {
        let iv = Interval::from_f64_bounds(0.5, 1.0);
        assert!(AlgebraicNumber::new(&p(&[-1, 1, 1]), &iv).is_ok());
        let wide = Interval::from_f64_bounds(-2.0, 1.0);
        assert!(AlgebraicNumber::new(&p(&[-1, 1, 1]), &wide).is_err());
        // closed endpoint root counts
        let at = Interval::from_f64_bounds(0.5, 0.75);
        let h = AlgebraicNumber::new(&p(&[-1, 2]), &at).unwrap();
        assert!(h.isolator().is_point());
    }
}
