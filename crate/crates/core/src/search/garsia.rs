use num_bigint::BigInt;
use serde::Serialize;

use super::minval::{min_nonzero_abs_value, CoeffClass, Mode, SearchResult};
use crate::error::Error;
use crate::numeric::{complex_root_disks, AlgebraicNumber, Disk, Dyadic, IntPolynomial, Interval};

const PREC: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundVerdict {
    Holds,
    Violated,
    Undecided,
}

/// `a_dⁿ ∏ⱼ P(λⱼ)` over the conjugates, which must be a nonzero integer.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub re: Interval,
    pub im: Interval,
    pub nearest: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GarsiaRow {
    pub n: usize,
    pub search: SearchResult,
    pub bound: Interval,
    pub verdict: BoundVerdict,
    pub identity: Option<IdentityCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GarsiaReport {
    pub xi: AlgebraicNumber,
    pub degree: usize,
    pub mahler: Interval,
    pub rows: Vec<GarsiaRow>,
    pub verdict: BoundVerdict,
}

/// `M^{-n} (n+1)^{1-d}`.
pub fn garsia_bound(mahler: &Interval, n: usize, d: usize) -> Interval {
    let denom = mahler.powi(n as u32).mul(&Interval::from_int((n + 1) as i64, PREC).powi(d.saturating_sub(1) as u32));
    denom.recip().expect("M ≥ 1")
}

fn disk_box(d: &Disk) -> (Interval, Interval) {
    let r = &d.radius;
    (Interval::new(&d.re - r, &d.re + r, PREC), Interval::new(&d.im - r, &d.im + r, PREC))
}

fn cmul(a: &(Interval, Interval), b: &(Interval, Interval)) -> (Interval, Interval) {
    (a.0.mul(&b.0).sub(&a.1.mul(&b.1)), a.0.mul(&b.1).add(&a.1.mul(&b.0)))
}

/// Evaluates the integrality identity for `p` over the roots of `q`, with
/// any factor shared by `p` and `q` divided out of `q` first.
pub fn proof_identity(q: &IntPolynomial, disks: &[Disk], p: &IntPolynomial, n: usize) -> Result<IdentityCheck, Error> {
    let g = q.gcd(p);
    let reduced;
    let (q, disks) = if g.degree() > 0 {
        let (quo, _) = q.to_rat().div_rem(&g.to_rat());
        let r = IntPolynomial::from_rat_positive(&quo);
        let d = complex_root_disks(&r, PREC)?;
        reduced = (r, d);
        (&reduced.0, reduced.1.as_slice())
    } else {
        (q, disks)
    };
    let mut acc = (Interval::from_int(q.leading().pow(n as u32), PREC), Interval::zero(PREC));
    for d in disks {
        let z = disk_box(d);
        let mut v = (Interval::zero(PREC), Interval::zero(PREC));
        for c in p.coeffs().iter().rev() {
            v = cmul(&v, &z);
            v.0 = v.0.add(&Interval::from_int(c.clone(), PREC));
        }
        acc = cmul(&acc, &v);
    }
    let (re, im) = acc;
    let nearest: BigInt = Dyadic::midpoint(re.lo(), re.hi()).to_rational().round().to_integer();
    let tol = Dyadic::pow2(-20);
    let m = Dyadic::from_int(nearest.clone());
    let close = |x: &Interval, c: &Dyadic| &(x.lo() - c).abs() <= &tol && &(x.hi() - c).abs() <= &tol;
    let ok = disks.iter().all(|d| d.certified) && nearest != BigInt::from(0) && close(&re, &m) && close(&im, &Dyadic::zero());
    Ok(IdentityCheck { re, im, nearest: nearest.to_string(), ok })
}

/// Checks `min_{P(ξ)≠0} |P(ξ)| ≥ M^{-n} (n+1)^{1-d}` for `n = 0..=n_max`,
/// with `d` and `M` taken from the defining polynomial of `ξ`.
pub fn verify_garsia_bound(xi: &AlgebraicNumber, n_max: usize) -> Result<GarsiaReport, Error> {
    if n_max > 16 {
        return Err(Error::Precondition(format!("n_max must be at most 16, got {n_max}")));
    }
    let q = xi.defining();
    let d = q.degree();
    let mahler = xi.mahler(PREC)?;
    let disks = complex_root_disks(q, PREC)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let search = min_nonzero_abs_value(xi, n, CoeffClass::Full, Mode::Pruned)?;
        let bound = garsia_bound(&mahler, n, d);
        let verdict = if search.min_value.lo() >= bound.hi() {
            BoundVerdict::Holds
        } else if search.min_value.hi() < bound.lo() {
            BoundVerdict::Violated
        } else {
            BoundVerdict::Undecided
        };
        let identity = Some(proof_identity(q, &disks, &search.argmin, n)?);
        rows.push(GarsiaRow { n, search, bound, verdict, identity });
    }
    let verdict = if rows.iter().any(|r| r.verdict == BoundVerdict::Violated) {
        BoundVerdict::Violated
    } else if rows.iter().all(|r| r.verdict == BoundVerdict::Holds) {
        BoundVerdict::Holds
    } else {
        BoundVerdict::Undecided
    };
    Ok(GarsiaReport { xi: xi.clone(), degree: d, mahler, rows, verdict })
}
