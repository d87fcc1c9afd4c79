use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::poly::{IntPolynomial, RatPoly};

/// Coordinates of an element of `Q[x]/(p)` in the basis `1, x, …, x^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector {
    coords: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalVector { coords }
    }

    pub fn zero(d: usize) -> Self {
        RationalVector { coords: vec![BigRational::zero(); d] }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.len(), o.len());
        RationalVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.len(), o.len());
        RationalVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        RationalVector { coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

/// Remainder of `q` modulo `p` as a length-`deg p` coordinate vector.
pub fn reduce_mod(q: &RatPoly, p: &IntPolynomial) -> RationalVector {
    let d = p.degree();
    assert!(d >= 1, "modulus must have degree at least 1");
    let (_, r) = q.div_rem(&p.to_rat());
    let mut coords = r.coeffs().to_vec();
    coords.resize(d, BigRational::zero());
    RationalVector { coords }
}

/// Multiplies a residue by `x` modulo `p`.
pub fn mul_x(v: &RationalVector, p: &IntPolynomial) -> RationalVector {
    let d = p.degree();
    let top = v.coords[d - 1].clone();
    let mut coords = Vec::with_capacity(d);
    coords.push(BigRational::zero());
    coords.extend_from_slice(&v.coords[..d - 1]);
    if !top.is_zero() {
        // x^d = -(a_0 + … + a_{d-1} x^{d-1}) / a_d
        let lead = BigRational::from_integer(p.leading());
        for (i, c) in coords.iter_mut().enumerate() {
            let a = BigRational::from_integer(p.coeff(i));
            *c -= &top * a / &lead;
        }
    }
    RationalVector { coords }
}

/// `x^0, x^1, …, x^{count-1}` reduced modulo `p`.
pub fn power_residues(p: &IntPolynomial, count: usize) -> Vec<RationalVector> {
    let d = p.degree();
    let mut out = Vec::with_capacity(count);
    let mut cur = RationalVector::zero(d);
    cur.coords[0] = BigRational::from_integer(BigInt::from(1));
    for _ in 0..count {
        out.push(cur.clone());
        cur = mul_x(&cur, p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rp(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    fn rv(c: &[i64]) -> RationalVector {
        RationalVector::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    #[test]
    fn golden_square() {
        let p = IntPolynomial::from_i64s(&[-1, 1, 1]);
        assert_eq!(reduce_mod(&rp(&[0, 0, 1]), &p), rv(&[1, -1]));
        assert_eq!(reduce_mod(&rp(&[0, 1]), &p), rv(&[0, 1]));
    }

    #[test]
    fn plastic_cube() {
        let p = IntPolynomial::from_i64s(&[-1, -1, 0, 1]);
        assert_eq!(reduce_mod(&rp(&[0, 0, 0, 1]), &p), rv(&[1, 1, 0]));
    }

    #[test]
    fn powers_match_direct_reduction() {
        let p = IntPolynomial::from_i64s(&[-3, 5]);
        let pw = power_residues(&p, 6);
        for (k, v) in pw.iter().enumerate() {
            assert_eq!(v, &reduce_mod(&IntPolynomial::x_pow(k).to_rat(), &p));
        }
        assert_eq!(pw[2].coords()[0], BigRational::new(9.into(), 25.into()));
    }

    fn small_rat_poly() -> impl Strategy<Value = RatPoly> {
        proptest::collection::vec(-20i64..=20, 0..8).prop_map(|c| rp(&c))
    }

    fn modulus() -> impl Strategy<Value = IntPolynomial> {
        proptest::collection::vec(-5i64..=5, 2..5)
            .prop_map(|c| IntPolynomial::from_i64s(&c))
            .prop_filter("degree >= 1", |p| p.degree() >= 1)
    }

    proptest! {
        #[test]
        fn ring_homomorphism(a in small_rat_poly(), b in small_rat_poly(), p in modulus()) {
            let ra = reduce_mod(&a, &p);
            let rb = reduce_mod(&b, &p);
            prop_assert_eq!(reduce_mod(&a.add(&b), &p), ra.add(&rb));
            prop_assert_eq!(reduce_mod(&a.mul(&b), &p), reduce_mod(&ra.to_poly().mul(&rb.to_poly()), &p));
        }

        #[test]
        fn equal_residues_iff_divisible(a in small_rat_poly(), b in small_rat_poly(), p in modulus()) {
            let same = reduce_mod(&a, &p) == reduce_mod(&b, &p);
            let (_, r) = a.sub(&b).div_rem(&p.to_rat());
            prop_assert_eq!(same, r.is_zero());
        }

        #[test]
        fn iterated_powers_agree(p in modulus()) {
            let pw = power_residues(&p, 10);
            for (k, v) in pw.iter().enumerate() {
                prop_assert_eq!(v, &reduce_mod(&IntPolynomial::x_pow(k).to_rat(), &p));
            }
        }
    }
}
