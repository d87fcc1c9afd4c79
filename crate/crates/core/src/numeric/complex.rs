//! Certified complex root disks.
//!
//! Roots are approximated by Aberth iteration (first in f64, then in dyadic
//! complex arithmetic at the working precision) and certified with the
//! Weierstrass corrections `W_i = P(z_i) / (a_n Π_{j≠i} (z_i − z_j))`.
//! `P / a_n` is the characteristic polynomial of `diag(z) − W·1ᵀ`, so by
//! Gerschgorin every root lies in some `D(z_i, n|W_i|)` and each connected
//! component holds as many roots as disks.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::dyadic::Dyadic;
use super::poly::IntPolynomial;
use crate::error::Error;

/// Largest working precision tried before giving up.
pub const MAX_PREC: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disk {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    pub certified: bool,
}

impl Disk {
    pub fn center_f64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `|center|²`, exact.
    pub fn center_norm_sqr(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// True when the whole disk lies strictly outside the unit circle.
    pub fn outside_unit(&self) -> bool {
        let one_r = &Dyadic::one() + &self.radius;
        self.center_norm_sqr() > &one_r * &one_r
    }

    /// True when the whole disk lies strictly inside the unit circle.
    pub fn inside_unit(&self) -> bool {
        if self.radius >= Dyadic::one() {
            return false;
        }
        let one_r = &Dyadic::one() - &self.radius;
        self.center_norm_sqr() < &one_r * &one_r
    }

    fn disjoint_from(&self, o: &Disk) -> bool {
        let dr = &self.re - &o.re;
        let di = &self.im - &o.im;
        let d2 = &(&dr * &dr) + &(&di * &di);
        let rr = &self.radius + &o.radius;
        d2 > &rr * &rr
    }
}

impl Serialize for Disk {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Disk", 4)?;
        st.serialize_field("re", &self.re.to_f64())?;
        st.serialize_field("im", &self.im.to_f64())?;
        st.serialize_field("radius", &self.radius.to_f64_up())?;
        st.serialize_field("certified", &self.certified)?;
        st.end()
    }
}

/// Complex dyadic, rounded to the working precision after each operation.
#[derive(Clone, Debug)]
struct Cd {
    re: Dyadic,
    im: Dyadic,
}

impl Cd {
    fn zero() -> Self {
        Cd { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    fn round(self, w: u32) -> Self {
        Cd { re: self.re.floor_to(w), im: self.im.floor_to(w) }
    }

    fn add(&self, o: &Cd) -> Cd {
        Cd { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Cd) -> Cd {
        Cd { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Cd) -> Cd {
        Cd {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    fn norm_sqr(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    fn recip(&self, w: u32) -> Option<Cd> {
        let n = self.norm_sqr().floor_to(2 * w);
        if n.is_zero() {
            return None;
        }
        Some(Cd { re: self.re.div_directed(&n, w, false), im: (-&self.im).div_directed(&n, w, false) })
    }

    fn from_c64(z: Complex64) -> Cd {
        Cd { re: Dyadic::from_f64(z.re).unwrap_or_else(Dyadic::zero), im: Dyadic::from_f64(z.im).unwrap_or_else(Dyadic::zero) }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

fn horner(coeffs: &[Dyadic], z: &Cd, w: u32) -> Cd {
    let mut acc = Cd::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).round(w);
        acc.re = &acc.re + c;
    }
    acc
}

fn horner_exact(coeffs: &[Dyadic], z: &Cd) -> Cd {
    let mut acc = Cd::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re = &acc.re + c;
    }
    acc
}

fn f64_aberth(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let bound = 1.0 + c[..n].iter().map(|x| (x / lead).abs()).fold(0.0, f64::max);
    let r0 = bound.min(1e6) * 0.7;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let d: Vec<f64> = (1..=n).map(|k| c[k] * k as f64).collect();
    let ev = |cs: &[f64], x: Complex64| cs.iter().rev().fold(Complex64::zero(), |a, &k| a * x + k);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = ev(c, z[i]);
            let dp = ev(&d, z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Snaps a center onto a nearby dyadic lattice point when that point is an
/// exact root, so exactly representable roots get radius zero.
fn snap_exact(coeffs: &[Dyadic], z: &Cd, w: u32) -> Cd {
    let grid = (w / 2) as i64;
    let r = |x: &Dyadic| {
        let s = x.mul_pow2(grid) + Dyadic::pow2(-1);
        Dyadic::from_int(s.floor_int()).mul_pow2(-grid)
    };
    let cand = Cd { re: r(&z.re), im: r(&z.im) };
    let v = horner_exact(coeffs, &cand);
    if v.re.is_zero() && v.im.is_zero() {
        cand
    } else {
        z.clone()
    }
}

fn refine(coeffs: &[Dyadic], z: &mut [Cd], w: u32) {
    let n = z.len();
    let deriv: Vec<Dyadic> = (1..coeffs.len()).map(|k| &coeffs[k] * &Dyadic::from_int(k as i64)).collect();
    let tol = Dyadic::pow2(-(w as i64) + 8);
    for _ in 0..200 {
        let mut done = true;
        for i in 0..n {
            let p = horner(coeffs, &z[i], w);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            let dp = horner(&deriv, &z[i], w);
            let Some(ratio) = dp.recip(w).map(|r| p.mul(&r).round(w)) else { continue };
            let mut s = Cd::zero();
            for j in 0..n {
                if j != i {
                    if let Some(q) = z[i].sub(&z[j]).recip(w) {
                        s = s.add(&q).round(w);
                    }
                }
            }
            let one = Cd { re: Dyadic::one(), im: Dyadic::zero() };
            let den = one.sub(&ratio.mul(&s)).round(w);
            let Some(step) = den.recip(w).map(|r| ratio.mul(&r).round(w)) else { continue };
            let scale = z[i].norm_sqr().max(Dyadic::one());
            if step.norm_sqr() > &(&tol * &tol) * &scale {
                done = false;
            }
            z[i] = z[i].sub(&step).round(w);
        }
        if done {
            break;
        }
    }
}

/// Inclusion radii `n |W_i|`, rounded up.
fn inclusion_radii(coeffs: &[Dyadic], z: &[Cd], w: u32) -> Vec<Dyadic> {
    let n = z.len();
    let lead = &coeffs[n];
    let lead2 = lead * lead;
    let nn = Dyadic::from_int(n as i64);
    (0..n)
        .map(|i| {
            let pv = horner_exact(coeffs, &z[i]).norm_sqr();
            if pv.is_zero() {
                return Dyadic::zero();
            }
            let mut prod = lead2.clone();
            for j in 0..n {
                if j != i {
                    prod = (&prod * &z[i].sub(&z[j]).norm_sqr()).floor_to(w + 8);
                }
            }
            if prod.is_zero() {
                return Dyadic::pow2(i64::from(MAX_PREC));
            }
            let w2 = pv.ceil_to(w + 8).div_directed(&prod, w + 8, true);
            (&nn * &w2.sqrt_directed(w + 8, true)).ceil_to(w + 8)
        })
        .collect()
}

fn all_disjoint(disks: &[Disk]) -> bool {
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            if !disks[i].disjoint_from(&disks[j]) {
                return false;
            }
        }
    }
    true
}

fn disks_at(coeffs: &[Dyadic], z: &mut Vec<Cd>, w: u32) -> Vec<Disk> {
    refine(coeffs, z, w);
    for zi in z.iter_mut() {
        *zi = snap_exact(coeffs, zi, w);
    }
    let radii = inclusion_radii(coeffs, z, w);
    let mut disks: Vec<Disk> = z
        .iter()
        .zip(radii)
        .map(|(c, r)| Disk { re: c.re.clone(), im: c.im.clone(), radius: r, certified: false })
        .collect();
    if all_disjoint(&disks) {
        for d in &mut disks {
            d.certified = true;
        }
    }
    disks
}

fn sort_disks(disks: &mut [Disk]) {
    disks.sort_by(|a, b| a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)));
}

/// Certified, pairwise-disjoint disks, one per root of a squarefree `P`.
///
/// Starts at `prec` bits and doubles up to `max(prec, 4096)`; radii shrink
/// roughly like `2^-prec`.
pub fn complex_root_disks(p: &IntPolynomial, prec: u32) -> Result<Vec<Disk>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.gcd(&p.derivative()).degree() > 0 {
        return Err(Error::Precondition("polynomial must be squarefree".into()));
    }
    let coeffs: Vec<Dyadic> = p.coeffs().iter().map(|c| Dyadic::from_int(c.clone())).collect();
    let cf: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();
    let start = if n == 1 {
        vec![Complex64::new(-cf[0] / cf[1], 0.0)]
    } else {
        f64_aberth(&cf)
    };
    let mut z: Vec<Cd> = start
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            if s.is_finite() {
                Cd::from_c64(s)
            } else {
                Cd::from_c64(Complex64::from_polar(1.0, k as f64))
            }
        })
        .collect();
    let cap = prec.max(MAX_PREC);
    let mut w = prec.max(32);
    loop {
        let mut disks = disks_at(&coeffs, &mut z, w);
        if disks[0].certified {
            sort_disks(&mut disks);
            return Ok(disks);
        }
        if w >= cap {
            sort_disks(&mut disks);
            return Err(Error::RootSeparation { prec: w, best_effort: disks });
        }
        w = (w * 2).min(cap);
        // perturb coincident approximations so Aberth can pull them apart
        for i in 0..z.len() {
            for j in 0..i {
                if z[i].sub(&z[j]).norm_sqr().is_zero() {
                    let c = z[i].to_c64() + Complex64::new(1e-9 * (i as f64 + 1.0), 1e-9);
                    z[i] = Cd::from_c64(c);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn i_and_minus_i() {
        let d = complex_root_disks(&p(&[1, 0, 1]), 64).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|x| x.certified));
        let mut ims: Vec<f64> = d.iter().map(|x| x.im.to_f64()).collect();
        ims.sort_by(f64::total_cmp);
        assert_eq!(ims, vec![-1.0, 1.0]);
        // exact roots snap to radius zero
        assert!(d.iter().all(|x| x.radius.is_zero()));
    }

    #[test]
    fn plastic_number_roots() {
        let d = complex_root_disks(&p(&[-1, -1, 0, 1]), 128).unwrap();
        assert_eq!(d.len(), 3);
        let real: Vec<&Disk> = d.iter().filter(|x| x.im.to_f64().abs() < 1e-20).collect();
        assert_eq!(real.len(), 1);
        assert!((real[0].re.to_f64() - 1.324717957244746).abs() < 1e-14);
        assert!(real[0].outside_unit());
        for x in d.iter().filter(|x| x.im.to_f64().abs() > 0.1) {
            assert!(x.inside_unit());
        }
    }

    #[test]
    fn golden_disks() {
        let d = complex_root_disks(&p(&[-1, 1, 1]), 64).unwrap();
        assert!((d[0].re.to_f64() + 1.618033988749895).abs() < 1e-14);
        assert!((d[1].re.to_f64() - 0.6180339887498949).abs() < 1e-14);
    }

    #[test]
    fn radii_shrink_with_precision() {
        let q = p(&[-1, -1, 0, 1]);
        let r64 = complex_root_disks(&q, 64).unwrap();
        let r256 = complex_root_disks(&q, 256).unwrap();
        for (a, b) in r64.iter().zip(&r256) {
            assert!(b.radius < a.radius);
            assert!(b.radius.to_f64() < 1e-60);
        }
    }

    #[test]
    fn non_squarefree_rejected() {
        assert!(complex_root_disks(&p(&[1, 2, 1]), 64).is_err());
    }

    #[test]
    fn disks_contain_roots_by_argument_check() {
        // every disk center is within its radius of a root of x^5 - x - 1:
        // |P(c)| <= |a_n| Π |c - root_j| so small residuals confirm closeness
        let q = p(&[-1, -1, 0, 0, 0, 1]);
        let d = complex_root_disks(&q, 128).unwrap();
        assert_eq!(d.len(), 5);
        for x in &d {
            let c = x.center_f64();
            let v = [-1.0, -1.0, 0.0, 0.0, 0.0, 1.0].iter().rev().fold(Complex64::zero(), |a, &k| a * c + k);
            assert!(v.norm() < 1e-12);
        }
    }
}
