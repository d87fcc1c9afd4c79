//! Entropy gaps of symmetric two-point Gaussian mixtures.
//!
//! `Φ(a) = sup_{t>0} H(X₀ta + G) − H(X₀t + G)` with `X₀ = ±1` and `G`
//! standard Gaussian. Only lower bounds of `Φ` are certified: every grid
//! value of `t` gives one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::numeric::Interval;

const LN2: f64 = std::f64::consts::LN_2;
const Z_MAX: f64 = 12.0;

/// `½ ln(2πe)`, the entropy of a standard Gaussian.
pub fn gaussian_entropy() -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln()
}

fn pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn softplus(y: f64) -> f64 {
    y.max(0.0) + (-y.abs()).exp().ln_1p()
}

/// Density-weighted correction term. With `Y = s + Z`,
/// `H(s) = ½ln(2πe) + ln 2 − E[softplus(−2sY)]`, which avoids the
/// cancellation of integrating `f ln f` directly.
fn integrand(s: f64, z: f64) -> f64 {
    pdf(z) * softplus(-2.0 * s * (z + s))
}

struct Simpson {
    evals: usize,
    budget: usize,
    err: f64,
    exhausted: bool,
}

impl Simpson {
    #[allow(clippy::too_many_arguments)]
    fn step(&mut self, f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        self.evals += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || depth == 0 || self.evals >= self.budget {
            if delta.abs() > 15.0 * tol {
                self.exhausted = true;
            }
            self.err += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        self.step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + self.step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }

    fn integrate(&mut self, f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        self.evals += 3;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.step(f, a, b, fa, fm, fb, whole, tol, 48)
    }
}

/// Enclosure of a mixture entropy, with a flag for quadrature that ran out
/// of budget before reaching its tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct MixtureEntropy {
    pub value: Interval,
    pub converged: bool,
}

/// `E[softplus(−2s(s+Z))]` with an error bound (quadrature estimate, the
/// analytic tail beyond `|z| = 12`, and float roundoff).
fn correction(s: f64, tol: f64) -> (f64, f64, bool) {
    let f = |z: f64| integrand(s, z);
    let mut q = Simpson { evals: 0, budget: 2_000_000, err: 0.0, exhausted: false };
    let split = (-s).clamp(-Z_MAX, Z_MAX);
    let v = q.integrate(&f, -Z_MAX, split, tol * 0.5) + q.integrate(&f, split, Z_MAX, tol * 0.5);
    // softplus(y) ≤ ln 2 + |y|, |y| ≤ 2s(|z| + s), and Q(12) ≤ φ(12)/12
    let p12 = pdf(Z_MAX);
    let tail = 2.0 * ((LN2 + 2.0 * s * s) * p12 / Z_MAX + 2.0 * s * p12);
    let round = (q.evals as f64) * f64::EPSILON * v.abs().max(LN2) + 1e-15;
    (v, q.err + tail + round, !q.exhausted)
}

/// Differential entropy of `(φ(x−s) + φ(x+s))/2`.
pub fn mixture_entropy(s: f64, tol: f64) -> Result<MixtureEntropy, Error> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Domain(format!("mixture offset must be finite and nonnegative, got {s}")));
    }
    let (c, err, converged) = correction(s, tol);
    let base = gaussian_entropy() + LN2;
    let mid = base - c;
    let slack = err + 4.0 * f64::EPSILON * base;
    Ok(MixtureEntropy { value: Interval::from_f64_bounds((mid - slack).next_down(), (mid + slack).next_up()), converged })
}

/// Grid and tolerance for [`phi`].
#[derive(Clone, Debug, Serialize)]
pub struct PhiConfig {
    pub u_min: f64,
    pub u_max: f64,
    pub u_step: f64,
    pub tol: f64,
}

impl Default for PhiConfig {
    fn default() -> Self {
        PhiConfig { u_min: -6.0, u_max: 6.0, u_step: 0.1, tol: 1e-12 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiEvaluation {
    pub a: f64,
    /// `lo` is a certified lower bound for `Φ(a)`.
    pub phi_lower: Interval,
    pub phi_estimate: f64,
    pub t_star: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
struct GapPoint {
    t: f64,
    lo: f64,
    hi: f64,
    mid: f64,
    converged: bool,
}

fn gap(a: f64, t: f64, tol: f64) -> GapPoint {
    let (c1, e1, ok1) = correction(t, tol);
    let (c2, e2, ok2) = correction(t * a, tol);
    // g(t) = H(ta) − H(t) = c1 − c2
    let mid = c1 - c2;
    let err = e1 + e2 + 4.0 * f64::EPSILON * (c1.abs() + c2.abs());
    GapPoint { t, lo: (mid - err).next_down(), hi: (mid + err).next_up(), mid, converged: ok1 && ok2 }
}

fn better(x: &GapPoint, y: &GapPoint) -> bool {
    x.lo > y.lo || (x.lo == y.lo && x.t < y.t)
}

/// Certified lower bound and heuristic value of `Φ(a)`.
pub fn phi(a: f64, cfg: &PhiConfig) -> Result<PhiEvaluation, Error> {
    if !a.is_finite() || a < 1.0 {
        return Err(Error::Domain(format!("Φ is defined for a ≥ 1, got {a}")));
    }
    if a == 1.0 {
        return Ok(PhiEvaluation { a, phi_lower: Interval::zero(64), phi_estimate: 0.0, t_star: 1.0, converged: true });
    }
    let steps = ((cfg.u_max - cfg.u_min) / cfg.u_step).round() as i64;
    let mut ts: Vec<f64> = (0..=steps).map(|k| (cfg.u_min + k as f64 * cfg.u_step).exp()).collect();
    ts.push(a.powf(-0.5));
    let pts: Vec<GapPoint> = ts.par_iter().map(|&t| gap(a, t, cfg.tol)).collect();
    let mut best = pts[0];
    for p in &pts[1..] {
        if better(p, &best) {
            best = *p;
        }
    }
    let mut converged = pts.iter().all(|p| p.converged);
    // golden-section on ln t around the best point; only ever improves the max
    let (mut lo, mut hi) = (best.t.ln() - cfg.u_step, best.t.ln() + cfg.u_step);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut g1 = gap(a, x1.exp(), cfg.tol);
    let mut g2 = gap(a, x2.exp(), cfg.tol);
    for _ in 0..40 {
        for g in [&g1, &g2] {
            converged &= g.converged;
            if better(g, &best) {
                best = *g;
            }
        }
        if g1.mid >= g2.mid {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = gap(a, x1.exp(), cfg.tol);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = gap(a, x2.exp(), cfg.tol);
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    for g in [&g1, &g2] {
        if better(g, &best) {
            best = *g;
        }
    }
    let lo_bound = best.lo.max(0.0);
    let hi_bound = best.hi.max(lo_bound);
    Ok(PhiEvaluation {
        a,
        phi_lower: Interval::from_f64_bounds(lo_bound, hi_bound),
        phi_estimate: best.mid.max(0.0),
        t_star: best.t,
        converged,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdResult {
    pub h: f64,
    /// `hi` is a certified threshold; below `lo` the certified bound of `Φ`
    /// stays under `h`.
    pub c_of_h: Interval,
    pub certified: bool,
    pub phi_at_threshold: Option<PhiEvaluation>,
}

/// Smallest bisection value `a` with `Φ(a) ≥ h` certified from below.
pub fn capital_c(h: f64, cfg: &PhiConfig) -> Result<ThresholdResult, Error> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Domain(format!("h must lie in (0, ln 2), got {h}")));
    }
    if h >= LN2 {
        return Err(Error::Domain(format!("h = {h} is not below ln 2; Φ never exceeds ln 2")));
    }
    let holds = |a: f64| -> Result<(bool, PhiEvaluation), Error> {
        let e = phi(a, cfg)?;
        Ok((e.phi_lower.lo_f64() >= h, e))
    };
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    let mut at_hi = loop {
        let (ok, e) = holds(hi)?;
        if ok {
            break e;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 2f64.powi(80) {
            return Ok(ThresholdResult { h, c_of_h: Interval::from_f64_bounds(lo, f64::MAX), certified: false, phi_at_threshold: None });
        }
    };
    for _ in 0..60 {
        if (hi - lo) <= 1e-6 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (ok, e) = holds(mid)?;
        if ok {
            hi = mid;
            at_hi = e;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdResult { h, c_of_h: Interval::from_f64_bounds(lo, hi), certified: true, phi_at_threshold: Some(at_hi) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_oracle(s: f64) -> f64 {
        // plain trapezoid on −∫ f ln f over a wide window
        let f = |x: f64| 0.5 * (pdf(x - s) + pdf(x + s));
        let (a, b, n) = (-s - 14.0, s + 14.0, 400_000);
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let x = a + i as f64 * h;
            let v = f(x);
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            if v > 0.0 {
                acc -= w * v * v.ln();
            }
        }
        acc * h
    }

    #[test]
    fn gaussian_limit() {
        let m = mixture_entropy(0.0, 1e-12).unwrap();
        assert!((m.value.mid_f64() - 1.4189385332046727).abs() < 1e-12);
        assert!(m.value.width_f64() < 1e-10);
    }

    #[test]
    fn separated_limit() {
        let m = mixture_entropy(10.0, 1e-12).unwrap();
        assert!((m.value.mid_f64() - 2.112085713764618).abs() < 1e-6);
    }

    #[test]
    fn matches_direct_quadrature() {
        for s in [0.3, 1.0, 2.5] {
            let m = mixture_entropy(s, 1e-12).unwrap();
            let o = quad_oracle(s);
            assert!((m.value.mid_f64() - o).abs() < 1e-8, "s={s}: {} vs {o}", m.value.mid_f64());
        }
    }

    #[test]
    fn monotone_and_bounded_in_s() {
        let mut last = 0.0;
        for k in 0..40 {
            let s = k as f64 * 0.25;
            let v = mixture_entropy(s, 1e-12).unwrap().value;
            assert!(v.lo_f64() >= gaussian_entropy() - 1e-9);
            assert!(v.hi_f64() <= gaussian_entropy() + LN2 + 1e-9);
            assert!(v.hi_f64() >= last);
            last = v.lo_f64();
        }
    }

    #[test]
    fn phi_at_one_is_zero() {
        let e = phi(1.0, &PhiConfig::default()).unwrap();
        assert_eq!(e.phi_lower.hi_f64(), 0.0);
        assert_eq!(e.phi_estimate, 0.0);
    }

    #[test]
    fn phi_four() {
        let e = phi(4.0, &PhiConfig::default()).unwrap();
        assert!(e.phi_lower.lo_f64() > 0.0);
        assert!(e.phi_lower.hi_f64() < LN2);
        assert!(e.phi_lower.width_f64() <= 1e-3);
    }

    #[test]
    fn phi_large_a() {
        let e = phi(1e6, &PhiConfig::default()).unwrap();
        assert!(e.phi_lower.lo_f64() >= 0.68);
        assert!(e.phi_estimate <= LN2 + 1e-6);
    }

    #[test]
    fn threshold_domain() {
        assert!(capital_c(0.70, &PhiConfig::default()).is_err());
        assert!(capital_c(0.0, &PhiConfig::default()).is_err());
    }

    #[test]
    fn threshold_near_zero_is_near_one() {
        let r = capital_c(1e-4, &PhiConfig::default()).unwrap();
        assert!(r.certified);
        assert!(r.c_of_h.hi_f64() < 1.1);
    }
}
