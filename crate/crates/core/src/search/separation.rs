use serde::Serialize;

use super::minval::{min_abs_value_with, CoeffClass, Mode, SearchResult};
use crate::error::Error;
use crate::numeric::{AlgebraicNumber, Dyadic, F64Interval, Interval};

const PREC: u32 = 192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeparationVerdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationSample {
    /// `+1` above ξ, `−1` below.
    pub side: i8,
    pub lambda: f64,
    pub lambda_exact: Dyadic,
    /// Certified enclosure of `|λ − ξ|`.
    pub distance: Interval,
    pub search: SearchResult,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub xi: AlgebraicNumber,
    pub n: usize,
    pub degree: usize,
    pub mahler: Interval,
    pub inner_radius: Interval,
    pub outer_radius: Interval,
    pub threshold: Interval,
    pub class: CoeffClass,
    pub samples: Vec<SeparationSample>,
    pub verdict: SeparationVerdict,
    /// The verdict covers the sampled λ only.
    pub scope: &'static str,
}

/// `10 d ln d`, with `0` for `d = 1`.
pub fn separation_threshold_n(d: usize) -> f64 {
    if d <= 1 {
        0.0
    } else {
        10.0 * d as f64 * (d as f64).ln()
    }
}

fn radii(m: &Interval, n: usize) -> (Interval, Interval, Interval) {
    let five_m = m.mul_int(5);
    let inner = five_m.powi(n as u32).recip().expect("positive");
    let outer = five_m.powi(n as u32 - 1).recip().expect("positive");
    let threshold = m.mul_int(20).powi(n as u32).recip().expect("positive");
    (inner, outer, threshold)
}

/// Offsets spanning `[a, b]`: both endpoints and Chebyshev points between.
fn offsets(a: f64, b: f64, count: usize) -> Vec<f64> {
    let m = count.saturating_sub(2);
    let mut out = vec![a];
    for k in 1..=m {
        let c = ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos();
        out.push(a + (b - a) * (1.0 - c) / 2.0);
    }
    if count >= 2 {
        out.push(b);
    }
    out
}

fn in_annulus(x: &Dyadic, xi: &Interval, inner: &Interval, outer: &Interval) -> bool {
    let d = Interval::point(x.clone(), PREC).sub(xi).abs();
    d.lo() >= inner.hi() && d.hi() <= outer.lo()
}

/// Samples `|P(λ)|` against `(20M)^{-n}` on both components of the annulus
/// `(5M)^{-n} ≤ |λ − ξ| ≤ (5M)^{-n+1}`.
pub fn separation_check(xi: &AlgebraicNumber, n: usize, sample_count: usize) -> Result<SeparationReport, Error> {
    let d = xi.degree();
    let need = separation_threshold_n(d);
    if (n as f64) <= need || n == 0 {
        return Err(Error::Precondition(format!(
            "separation needs n > 10 d log d = {need:.4} for d = {d}; got n = {n}"
        )));
    }
    if sample_count < 2 {
        return Err(Error::Precondition("need at least 2 samples per side".into()));
    }
    let e = xi.enclosure(PREC);
    let half = Dyadic::pow2(-1);
    let inside = e.lo() > &half && &e.hi().powi(2) < &half;
    if !inside {
        return Err(Error::Domain("xi must lie in (1/2, 2^{-1/2})".into()));
    }
    // FULL class up to 2^{-2/3}, the trimmed class beyond
    let class = if e.hi().powi(3) <= Dyadic::pow2(-2) { CoeffClass::Full } else { CoeffClass::QTrimmed };
    let mahler = xi.mahler(PREC)?;
    let (inner, outer, threshold) = radii(&mahler, n);
    let a = inner.hi_f64() * (1.0 + 1e-9);
    let b = outer.lo_f64() * (1.0 - 1e-9);
    let centre = e.mid();
    let mut samples = Vec::new();
    for side in [-1i8, 1] {
        for r in offsets(a, b, sample_count) {
            // a hardware float when it lands in the annulus, else an exact dyadic
            let fast = centre.to_f64() + side as f64 * r;
            let off = Dyadic::from_f64(side as f64 * r).expect("finite");
            let (exact, hardware) = match Dyadic::from_f64(fast) {
                Some(x) if in_annulus(&x, &e, &inner, &outer) => (x, true),
                _ => ((&centre + &off).floor_to(PREC), false),
            };
            let lam = Interval::point(exact.clone(), PREC);
            let distance = lam.sub(&e).abs();
            if !in_annulus(&exact, &e, &inner, &outer) {
                return Err(Error::Precondition(format!("sample λ = {exact} fell outside the annulus")));
            }
            let lambda = exact.to_f64();
            let search = if hardware {
                min_abs_value_with(&F64Interval::point(lambda), n, class, Mode::Pruned, None)?
            } else {
                min_abs_value_with(&lam, n, class, Mode::Pruned, None)?
            };
            let pass = search.min_value.lo() > threshold.hi();
            samples.push(SeparationSample { side, lambda, lambda_exact: exact, search, distance, pass });
        }
    }
    let verdict = if samples.iter().all(|s| s.pass) {
        SeparationVerdict::Pass
    } else if samples.iter().any(|s| s.search.min_value.hi() < threshold.lo()) {
        SeparationVerdict::Fail
    } else {
        SeparationVerdict::Inconclusive
    };
    Ok(SeparationReport {
        xi: xi.clone(),
        n,
        degree: d,
        mahler,
        inner_radius: inner,
        outer_radius: outer,
        threshold,
        class,
        samples,
        verdict,
        scope: "SAMPLED_POINTS",
    })
}
