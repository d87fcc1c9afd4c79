//! Real root isolation by Sturm sequences and bisection over dyadic points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::dyadic::Dyadic;
use super::interval::Interval;
use super::poly::IntPolynomial;
use crate::error::Error;

/// Sturm chain of a squarefree polynomial, every member scaled to a
/// primitive integer polynomial by a positive factor.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut chain = vec![p.clone()];
        if p.degree() > 0 {
            chain.push(IntPolynomial::from_rat_positive(&p.derivative().to_rat()));
            loop {
                let n = chain.len();
                let r = chain[n - 2].to_rat().div_rem(&chain[n - 1].to_rat()).1;
                if r.is_zero() {
                    break;
                }
                chain.push(IntPolynomial::from_rat_positive(&r).neg());
            }
        }
        SturmChain { chain }
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.chain[0]
    }

    /// Sign variations at `x`, zeros skipped.
    pub fn variations(&self, x: &Dyadic) -> usize {
        let mut last = 0;
        let mut v = 0;
        for q in &self.chain {
            let s = q.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Dyadic, b: &Dyadic) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// A power of two strictly larger than the modulus of every root.
pub fn root_bound(p: &IntPolynomial) -> Dyadic {
    let lead = p.leading().abs();
    let m = p.coeffs()[..p.degree()].iter().map(|c| c.abs()).max().unwrap_or_default();
    // Cauchy: |root| <= 1 + m / |lead| < 2^k
    let bound = BigRational::from_integer(BigInt::from(1)) + BigRational::new(m, lead);
    let mut k = 0i64;
    while BigRational::from_integer(BigInt::from(1) << k as u64) <= bound {
        k += 1;
    }
    Dyadic::pow2(k)
}

/// Isolating cell of one root: `lo == hi` for an exactly dyadic root,
/// otherwise the root lies strictly inside and `p(lo)`, `p(hi)` are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RootCell {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RootCell {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn to_interval(&self) -> Interval {
        let bits = self.lo.bits().max(self.hi.bits()).max(64) as u32;
        Interval::new(self.lo.clone(), self.hi.clone(), bits)
    }

    /// Halves the cell by sign comparison.
    pub fn bisect(&mut self, p: &IntPolynomial) {
        if self.is_exact() {
            return;
        }
        let m = Dyadic::midpoint(&self.lo, &self.hi);
        let sm = p.sign_at(&m);
        if sm == 0 {
            self.lo = m.clone();
            self.hi = m;
        } else if sm == p.sign_at(&self.lo) {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    pub fn refine_to(&mut self, p: &IntPolynomial, width: &Dyadic) {
        while !self.is_exact() && &self.width() > width {
            self.bisect(p);
        }
    }
}

/// Moves off an exact root `x` toward `dir` (±1) to a point that is not a
/// root and has no root strictly between it and `x`.
fn step_off_root(chain: &SturmChain, x: &Dyadic, scale: &Dyadic, dir: i32) -> Dyadic {
    let mut k = 8i64;
    loop {
        let off = scale.mul_pow2(-k);
        let y = if dir > 0 { x + &off } else { x - &off };
        if chain.poly().sign_at(&y) != 0 {
            let (a, b) = if dir > 0 { (x, &y) } else { (&y, x) };
            // (a, b] roots: exactly x itself when stepping down, none when stepping up
            let expected = if dir > 0 { 0 } else { 1 };
            if chain.count(a, b) == expected {
                return y;
            }
        }
        k += 1;
    }
}

/// All roots of `p` in the open interval `(lo, hi)`, as cells.
pub(crate) fn isolate_cells(p: &IntPolynomial, lo: &Dyadic, hi: &Dyadic) -> Vec<RootCell> {
    let chain = SturmChain::new(p);
    let mut out = Vec::new();
    if p.degree() == 0 || lo >= hi {
        return out;
    }
    let span = hi - lo;
    let lo = if p.sign_at(lo) == 0 { step_off_root(&chain, lo, &span, 1) } else { lo.clone() };
    let hi = if p.sign_at(hi) == 0 { step_off_root(&chain, hi, &span, -1) } else { hi.clone() };
    // endpoints of every pending cell are non-roots
    let mut stack = vec![(lo.clone(), hi.clone(), chain.count(&lo, &hi))];
    while let Some((a, b, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(RootCell { lo: a, hi: b });
            continue;
        }
        let m = Dyadic::midpoint(&a, &b);
        if p.sign_at(&m) == 0 {
            let w = &b - &a;
            let ml = step_off_root(&chain, &m, &w, -1);
            let mr = step_off_root(&chain, &m, &w, 1);
            out.push(RootCell { lo: m.clone(), hi: m });
            let nl = chain.count(&a, &ml);
            let nr = chain.count(&mr, &b);
            stack.push((mr, b, nr));
            stack.push((a, ml, nl));
        } else {
            let nl = chain.count(&a, &m);
            stack.push((m.clone(), b, n - nl));
            stack.push((a, m, nl));
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Refines cells until each is at most `width` wide and no two closed cells
/// touch.
pub(crate) fn refine_disjoint(p: &IntPolynomial, cells: &mut [RootCell], width: &Dyadic) {
    for c in cells.iter_mut() {
        c.refine_to(p, width);
    }
    loop {
        let mut clean = true;
        for i in 1..cells.len() {
            if cells[i - 1].hi >= cells[i].lo {
                clean = false;
                let (l, r) = cells.split_at_mut(i);
                l[i - 1].bisect(p);
                r[0].bisect(p);
            }
        }
        if clean {
            break;
        }
    }
}

fn width_from_rational(target: &BigRational) -> Result<Dyadic, Error> {
    if !target.is_positive() {
        return Err(Error::Domain("target width must be positive".into()));
    }
    Ok(Dyadic::from_rational_floor(target, 64))
}

/// Isolates every real root of `p` (squarefree part taken first) into
/// pairwise-disjoint intervals of width at most `target_width`.
pub fn isolate_real_roots(p: &IntPolynomial, target_width: &BigRational) -> Result<Vec<Interval>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let width = width_from_rational(target_width)?;
    let sq = p.squarefree_part();
    let b = root_bound(&sq);
    let mut cells = isolate_cells(&sq, &-&b, &b);
    refine_disjoint(&sq, &mut cells, &width);
    Ok(cells.iter().map(RootCell::to_interval).collect())
}

/// Roots in the open interval `(lo, hi)` only.
pub fn isolate_real_roots_in(
    p: &IntPolynomial,
    lo: &Dyadic,
    hi: &Dyadic,
    target_width: &BigRational,
) -> Result<Vec<Interval>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let width = width_from_rational(target_width)?;
    let sq = p.squarefree_part();
    let mut cells = isolate_cells(&sq, lo, hi);
    refine_disjoint(&sq, &mut cells, &width);
    Ok(cells.iter().map(RootCell::to_interval).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn tw(bits: u32) -> BigRational {
        BigRational::new(1.into(), BigInt::from(1) << bits)
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1]), &tw(20)).unwrap().is_empty());
    }

    #[test]
    fn golden_roots() {
        let r = isolate_real_roots(&p(&[-1, 1, 1]), &tw(40)).unwrap();
        assert_eq!(r.len(), 2);
        let s5 = 5f64.sqrt();
        assert!((r[0].mid_f64() - (-1.0 - s5) / 2.0).abs() < 1e-11);
        assert!((r[1].mid_f64() - (s5 - 1.0) / 2.0).abs() < 1e-11);
        assert!(r[0].width_f64() <= 2f64.powi(-40));
    }

    #[test]
    fn exact_dyadic_root_is_a_point() {
        let r = isolate_real_roots(&p(&[-1, 2]), &tw(10)).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].is_point());
        assert_eq!(r[0].lo(), &Dyadic::pow2(-1));
    }

    #[test]
    fn repeated_roots_reported_once() {
        // (x - 1/2)^2 (x + 3)
        let q = p(&[-1, 2]).mul(&p(&[-1, 2])).mul(&p(&[3, 1]));
        let r = isolate_real_roots(&q, &tw(10)).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn close_roots_are_separated() {
        // (x - 1/3)(x - 1/3 - 2^-30)
        let a = IntPolynomial::from_i64s(&[-1, 3]);
        let den: i64 = 3 << 30;
        let b = IntPolynomial::from_i64s(&[-((1i64 << 30) + 3), den]);
        let r = isolate_real_roots(&a.mul(&b), &tw(4)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].hi() < r[1].lo());
    }

    #[test]
    fn region_restriction_excludes_boundary_roots() {
        // roots at 1 and the golden root
        let q = p(&[1, -1]).mul(&p(&[-1, 1, 1]));
        let r = isolate_real_roots_in(&q, &Dyadic::pow2(-1), &Dyadic::one(), &tw(30)).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].mid_f64() - 0.618034).abs() < 1e-6);
    }

    fn grid_sign_changes(q: &IntPolynomial, lo: f64, hi: f64, steps: usize) -> usize {
        let c: Vec<f64> = q.coeffs().iter().map(|x| x.to_string().parse::<f64>().unwrap()).collect();
        let ev = |x: f64| c.iter().rev().fold(0.0, |a, k| a * x + k);
        let mut count = 0;
        let mut last = ev(lo).signum();
        for i in 1..=steps {
            let s = ev(lo + (hi - lo) * i as f64 / steps as f64).signum();
            if s != 0.0 && last != 0.0 && s != last {
                count += 1;
            }
            if s != 0.0 {
                last = s;
            }
        }
        count
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // For products of distinct, well-spaced linear factors the sign
        // scan on a fine grid sees every root.
        #[test]
        fn sturm_matches_grid_scan(roots in proptest::collection::btree_set(-20i64..20, 1..6)) {
            let mut q = IntPolynomial::from_i64s(&[1]);
            for r in &roots {
                q = q.mul(&IntPolynomial::from_i64s(&[-2 * r - 1, 4]));
            }
            let iso = isolate_real_roots(&q, &tw(20)).unwrap();
            prop_assert_eq!(iso.len(), roots.len());
            prop_assert_eq!(grid_sign_changes(&q, -12.0, 12.0, 4800), roots.len());
            let sq = q.squarefree_part();
            let chain = SturmChain::new(&sq);
            let b = root_bound(&sq);
            prop_assert_eq!(chain.count(&-&b, &b), iso.len());
        }

        #[test]
        fn isolated_roots_change_sign(c in proptest::collection::vec(-10i64..=10, 2..8)) {
            let q = IntPolynomial::from_i64s(&c);
            prop_assume!(q.degree() >= 1);
            let sq = q.squarefree_part();
            for iv in isolate_real_roots(&q, &tw(30)).unwrap() {
                if iv.is_point() {
                    prop_assert_eq!(sq.sign_at(iv.lo()), 0);
                } else {
                    prop_assert!(sq.sign_at(iv.lo()) * sq.sign_at(iv.hi()) < 0);
                }
            }
        }
    }
}
