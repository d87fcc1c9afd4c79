use num_traits::Signed;

use super::complex::{complex_root_disks, Disk, MAX_PREC};
use super::dyadic::Dyadic;
use super::interval::Interval;
use super::poly::IntPolynomial;
use crate::error::Error;

/// `max(1, |z|)` over a disk, or `None` when the disk straddles the unit
/// circle.
fn outer_factor(d: &Disk, prec: u32) -> Option<Interval> {
    if d.inside_unit() {
        return Some(Interval::one(prec));
    }
    let n2 = d.center_norm_sqr();
    if d.radius.is_zero() && n2 == Dyadic::one() {
        return Some(Interval::one(prec));
    }
    if !d.outside_unit() {
        return None;
    }
    Some(modulus(d, prec))
}

fn modulus(d: &Disk, prec: u32) -> Interval {
    let n2 = d.center_norm_sqr();
    let lo = &n2.sqrt_directed(prec + 8, false) - &d.radius;
    let hi = &n2.sqrt_directed(prec + 8, true) + &d.radius;
    let lo = if lo < Dyadic::one() { Dyadic::one() } else { lo };
    Interval::new(lo, hi, prec)
}

/// Mahler measure of a squarefree polynomial with nonzero constant term,
/// leading coefficient included.
fn mahler_squarefree(p: &IntPolynomial, prec: u32) -> Result<Interval, Error> {
    let w = prec + 16;
    let mut work = w;
    loop {
        let disks = match complex_root_disks(p, work) {
            Ok(d) => d,
            Err(Error::RootSeparation { .. }) if work < MAX_PREC => {
                work = (work * 2).min(MAX_PREC);
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut acc = Interval::from_int(p.leading().abs(), w);
        let mut straddle = false;
        for d in &disks {
            match outer_factor(d, w) {
                Some(f) => acc = acc.mul(&f),
                None if work < MAX_PREC => {
                    straddle = true;
                    break;
                }
                None => {
                    let m = modulus(d, w);
                    acc = acc.mul(&Interval::new(Dyadic::one(), m.hi().clone(), w));
                }
            }
        }
        if !straddle {
            return Ok(acc.with_prec(prec));
        }
        work = (work * 2).min(MAX_PREC);
    }
}

/// Enclosure of `|a_d| Π_{|λ_j|>1} |λ_j|`.
///
/// Repeated factors are handled through the squarefree decomposition
/// (`M` is multiplicative), and `x^k` factors contribute nothing.
pub fn mahler_measure(p: &IntPolynomial, prec: u32) -> Result<Interval, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, q) = p.strip_x_power();
    let content = q.content();
    let mut acc = Interval::from_int(content.abs(), prec);
    for (s, k) in q.squarefree_decomposition() {
        let m = mahler_squarefree(&s, prec)?;
        acc = acc.mul(&m.powi(k));
    }
    Ok(acc)
}
