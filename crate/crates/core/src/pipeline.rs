//! Dimension verdicts from the Mahler measure, the entropy series and `Φ`,
//! the `c·min(ln 2, ln M)` sandwich check, and a Monte-Carlo box-entropy
//! cross-check.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::entropy::{entropy_series_with_cap, garsia_estimate, garsia_upper_bound, EntropySeries, Estimate, IndexFilter};
use crate::error::Error;
use crate::numeric::interval::ln2;
use crate::numeric::{AlgebraicNumber, Dyadic, Interval};
use crate::phi::{phi, PhiConfig, PhiEvaluation};

pub const DEFAULT_N_MAX: usize = 24;
/// Value-table cap for the dimension pipeline.
pub const DEFAULT_TABLE_CAP: usize = 4_000_000;
pub const BV_CONSTANT: f64 = 0.44;

pub const QUADRATURE_CAVEAT: &str = "h_lower comes from the Phi lower bound, whose quadrature and \
tail errors are estimated, not rigorously bounded; DIM_ONE_CERTIFIED holds modulo that quadrature tail bound.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DimensionVerdict {
    DimOneCertified,
    DimLtOneCertified,
    Unresolved,
}

/// Verdict from the three windows alone.
pub fn decide(h_lower: &Interval, h_upper: &Interval, log_lambda_inv: &Interval) -> DimensionVerdict {
    if h_lower.lo() >= log_lambda_inv.hi() {
        DimensionVerdict::DimOneCertified
    } else if h_upper.hi() < log_lambda_inv.lo() {
        DimensionVerdict::DimLtOneCertified
    } else {
        DimensionVerdict::Unresolved
    }
}

/// `min(1, h/ℓ)` with outward rounding; `ℓ` must be positive.
pub fn dim_upper(h_upper: &Interval, log_lambda_inv: &Interval) -> Interval {
    let prec = h_upper.prec().max(log_lambda_inv.prec());
    let ratio = h_upper.div(log_lambda_inv).expect("ln λ⁻¹ > 0");
    ratio.min(&Interval::one(prec))
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub n_max: usize,
    pub prec: u32,
    pub table_cap: usize,
    pub phi: PhiConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { n_max: DEFAULT_N_MAX, prec: 128, table_cap: DEFAULT_TABLE_CAP, phi: PhiConfig::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesPoint {
    pub n: usize,
    pub h: Interval,
    /// `H_N / N`.
    pub ratio: Interval,
    /// `H_N / (N ln λ⁻¹)`.
    pub normalized: Interval,
}

#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub lambda: AlgebraicNumber,
    pub log_lambda_inv: Interval,
    pub mahler: Interval,
    pub hn_series: Vec<SeriesPoint>,
    pub h_upper: Interval,
    pub h_lower: Interval,
    pub dim_upper: Interval,
    pub dim_estimate: Estimate,
    pub verdict: DimensionVerdict,
    pub flags: Vec<String>,
    pub phi: PhiEvaluation,
}

impl DimensionReport {
    /// The verdict recomputed from the stored windows.
    pub fn rederived_verdict(&self) -> DimensionVerdict {
        decide(&self.h_lower, &self.h_upper, &self.log_lambda_inv)
    }
}

impl Serialize for DimensionReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DimensionReport", 13)?;
        st.serialize_field("lambda_poly", self.lambda.defining())?;
        st.serialize_field("isolator", &self.lambda.isolator())?;
        st.serialize_field("mahler", &self.mahler)?;
        st.serialize_field("hn_series", &self.hn_series)?;
        st.serialize_field("h_upper", &self.h_upper)?;
        st.serialize_field("h_lower", &self.h_lower)?;
        st.serialize_field("log_lambda_inv", &self.log_lambda_inv)?;
        st.serialize_field("dim_upper", &self.dim_upper)?;
        st.serialize_field("dim_estimate", &self.dim_estimate)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("flags", &self.flags)?;
        st.serialize_field("phi", &self.phi)?;
        st.serialize_field("caveat", QUADRATURE_CAVEAT)?;
        st.end()
    }
}

/// `ln λ⁻¹`, which needs `λ ⊂ (0, 1)`.
fn log_inverse(lambda: &AlgebraicNumber, prec: u32) -> Result<Interval, Error> {
    let e = lambda.enclosure(prec);
    if !(e.is_positive() && e.hi() < &Dyadic::one()) {
        return Err(Error::Domain(format!("λ must lie in (0, 1), got enclosure {e:?}")));
    }
    Ok(e.recip().and_then(|r| r.ln()).expect("λ ∈ (0, 1)"))
}

fn checked_series(lambda: &AlgebraicNumber, cfg: &PipelineConfig) -> Result<(EntropySeries, Vec<String>), Error> {
    let series = entropy_series_with_cap(lambda, cfg.n_max, IndexFilter::All, cfg.table_cap)?;
    let mut flags = Vec::new();
    if let Some(t) = &series.truncated {
        flags.push(format!("TRUNCATED_SERIES at N={} ({} entries): {}", t.at_n, t.table_size, t.reason));
    }
    Ok((series, flags))
}

/// `Φ(M)` as a lower bound for the entropy, using `Φ` at the lower end of
/// the Mahler enclosure.
fn entropy_lower(mahler: &Interval, cfg: &PhiConfig) -> Result<(Interval, PhiEvaluation), Error> {
    let a = mahler.lo_f64().next_down().max(1.0);
    let e = phi(a, cfg)?;
    let lo = e.phi_lower.lo().clone();
    Ok((Interval::new(lo.clone(), lo, 64), e))
}

/// Upper bound for the entropy, the certified lower bound from `Φ(M)`, and
/// the verdict they force on `dim ν_λ = min(1, h/ln λ⁻¹)`.
pub fn dimension_report(lambda: &AlgebraicNumber, cfg: &PipelineConfig) -> Result<DimensionReport, Error> {
    let log_lambda_inv = log_inverse(lambda, cfg.prec)?;
    let (series, lower) = rayon::join(
        || checked_series(lambda, cfg),
        || -> Result<_, Error> {
            let mahler = lambda.mahler(cfg.prec)?;
            let (h_lower, ev) = entropy_lower(&mahler, &cfg.phi)?;
            Ok((mahler, h_lower, ev))
        },
    );
    let (series, mut flags) = series?;
    let (mahler, h_lower, phi_eval) = lower?;
    if series.entries.is_empty() {
        return Err(Error::Precondition("entropy series is empty; raise the table cap".into()));
    }
    let h_upper = garsia_upper_bound(&series)?;
    let hn_series = series
        .entries
        .iter()
        .map(|e| {
            let ratio = e.ratio();
            let normalized = ratio.div(&log_lambda_inv).expect("ln λ⁻¹ > 0");
            SeriesPoint { n: e.n, h: e.h.clone(), ratio, normalized }
        })
        .collect();

    // in bits, so that λ = 1/2 gives exactly 1
    let bits_upper = series.entries.iter().map(|e| e.ratio_bits()).reduce(|a, b| a.min(&b)).expect("nonempty");
    let log2_inv = lambda.enclosure(cfg.prec).recip().and_then(|r| r.log2()).expect("λ ∈ (0, 1)");
    let dim_upper = dim_upper(&bits_upper, &log2_inv);

    let dim_estimate = match garsia_estimate(&series) {
        Ok(est) => {
            let l = log_lambda_inv.mid_f64();
            Estimate::uncertified((est.value / l).min(1.0), est.spread / l)
        }
        Err(_) => {
            flags.push("SHORT_SERIES: dim_estimate is the last ratio".into());
            Estimate::uncertified(dim_upper.hi_f64(), 0.0)
        }
    };
    if !phi_eval.converged {
        flags.push("PHI_NOT_CONVERGED".into());
    }
    if h_lower.lo() > h_upper.hi() {
        flags.push("WINDOW_CROSSING: Phi(M) exceeds the Fekete bound".into());
    }
    let verdict = decide(&h_lower, &h_upper, &log_lambda_inv);
    Ok(DimensionReport {
        lambda: lambda.clone(),
        log_lambda_inv,
        mahler,
        hn_series,
        h_upper,
        h_lower,
        dim_upper,
        dim_estimate,
        verdict,
        flags,
        phi: phi_eval,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BvCheckReport {
    pub lambda: AlgebraicNumber,
    pub c: f64,
    pub mahler: Interval,
    /// `c · min(ln 2, ln M)`.
    pub lhs: Interval,
    /// `min(ln 2, ln M)`.
    pub rhs_upper: Interval,
    pub h_window: (Interval, Interval),
    pub tolerance: f64,
    /// `h_upper.hi ≤ rhs_upper.hi + tolerance`; the Fekete bound converges
    /// slowly, so this is informational.
    pub upper_within_tolerance: bool,
    /// `h_lower.lo > rhs_upper.hi`, which no correct computation produces.
    pub upper_violated: bool,
    pub windows_non_crossing: bool,
    /// `lhs.lo ≤ h_upper.hi`: the `c` claim is not contradicted.
    pub lower_claim_consistent: bool,
    pub consistent: bool,
    pub flags: Vec<String>,
}

/// Compares the entropy window with `c·min(ln 2, ln M) ≤ h ≤ min(ln 2, ln M)`.
pub fn bv_inequality_check(lambda: &AlgebraicNumber, cfg: &PipelineConfig, c: f64, tolerance: f64) -> Result<BvCheckReport, Error> {
    log_inverse(lambda, cfg.prec)?;
    let (series, mut flags) = checked_series(lambda, cfg)?;
    let h_upper = garsia_upper_bound(&series)?;
    let mahler = lambda.mahler(cfg.prec)?;
    let (h_lower, _) = entropy_lower(&mahler, &cfg.phi)?;
    let rhs_upper = mahler.ln().expect("M ≥ 1").min(&ln2(cfg.prec));
    let lhs = rhs_upper.mul(&Interval::from_f64_bounds(c, c));
    let upper_within_tolerance = h_upper.hi_f64() <= rhs_upper.hi_f64() + tolerance;
    let upper_violated = h_lower.lo() > rhs_upper.hi();
    if upper_violated {
        flags.push("UPPER_INEQUALITY_VIOLATED".into());
    }
    if !upper_within_tolerance {
        flags.push(format!("FEKETE_BOUND_ABOVE_MIN_LN2_LN_M at N={}", series.entries.len()));
    }
    let windows_non_crossing = h_lower.lo() <= h_upper.hi();
    let lower_claim_consistent = lhs.lo() <= h_upper.hi();
    flags.push("C_0.44_NOT_RIGOROUS".into());
    Ok(BvCheckReport {
        lambda: lambda.clone(),
        c,
        mahler,
        lhs,
        rhs_upper,
        h_window: (h_lower, h_upper),
        tolerance,
        upper_within_tolerance,
        upper_violated,
        windows_non_crossing,
        lower_claim_consistent,
        consistent: !upper_violated && windows_non_crossing && lower_claim_consistent,
        flags,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxEntropy {
    pub lambda: f64,
    pub n: usize,
    pub sample_count: usize,
    pub scale_exponent: u32,
    pub coarse_exponent: u32,
    pub seed: u64,
    /// Bound on the dropped tail `Σ_{n≥N} λⁿ`.
    pub truncation_error: f64,
    pub fine_entropy: f64,
    pub coarse_entropy: f64,
    pub bootstrap_rounds: usize,
    pub estimate: Estimate,
}

pub const MIN_SAMPLES: usize = 10_000;
const BOOTSTRAP_ROUNDS: usize = 32;

/// Smallest `N` whose tail `λ^N / (1 − λ)` is at most `r / 8`.
pub fn min_truncation(lambda_hi: f64, scale_exponent: u32) -> usize {
    let r = (-(scale_exponent as f64)).exp2();
    let target = r * (1.0 - lambda_hi) / 8.0;
    (target.ln() / lambda_hi.ln()).ceil().max(1.0) as usize
}

/// Plug-in entropy of dense bin ids with the Miller–Madow correction.
fn histogram_entropy(counts: &[u32], total: usize) -> f64 {
    let t = total as f64;
    let mut h = 0.0;
    let mut occupied = 0usize;
    for &c in counts {
        if c > 0 {
            occupied += 1;
            let p = c as f64 / t;
            h -= p * p.ln();
        }
    }
    h + (occupied as f64 - 1.0) / (2.0 * t)
}

/// Bin ids `⌊x/r⌋` renumbered densely.
fn dense_bins(xs: &[f64], r: f64) -> (Vec<u32>, usize) {
    let raw: Vec<i64> = xs.iter().map(|x| (x / r).floor() as i64).collect();
    let mut keys = raw.clone();
    keys.sort_unstable();
    keys.dedup();
    let ids = raw.iter().map(|k| keys.binary_search(k).expect("present") as u32).collect();
    (ids, keys.len())
}

fn entropy_of(ids: &[u32], bins: usize, pick: impl Iterator<Item = usize>) -> f64 {
    let mut counts = vec![0u32; bins];
    let mut total = 0;
    for i in pick {
        counts[ids[i] as usize] += 1;
        total += 1;
    }
    histogram_entropy(&counts, total)
}

/// Monte-Carlo estimate of the box dimension of the truncated measure from
/// the entropy difference between scales `2^{-s/2}` and `2^{-s}`.
pub fn empirical_box_entropy(lambda: &Interval, n: usize, sample_count: usize, scale_exponent: u32, seed: u64) -> Result<BoxEntropy, Error> {
    if !(lambda.is_positive() && lambda.hi() < &Dyadic::one()) {
        return Err(Error::Domain("λ must lie in (0, 1)".into()));
    }
    if sample_count < MIN_SAMPLES {
        return Err(Error::Precondition(format!("sample_count must be at least {MIN_SAMPLES}, got {sample_count}")));
    }
    if !(2..=40).contains(&scale_exponent) {
        return Err(Error::Precondition(format!("scale exponent must lie in 2..=40, got {scale_exponent}")));
    }
    let lam_hi = lambda.hi_f64();
    let need = min_truncation(lam_hi, scale_exponent);
    if n < need {
        return Err(Error::Precondition(format!(
            "truncation at N = {n} is too coarse for r = 2^-{scale_exponent}; need N >= {need}"
        )));
    }
    let lam = lambda.mid_f64();
    let truncation_error = lam_hi.powi(n as i32) / (1.0 - lam_hi);
    let powers: Vec<f64> = std::iter::successors(Some(1.0f64), |p| Some(p * lam)).take(n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..sample_count)
        .map(|_| {
            let mut x = 0.0;
            let mut bits = 0u64;
            for (k, p) in powers.iter().enumerate() {
                if k % 64 == 0 {
                    bits = rng.next_u64();
                }
                x += if bits & 1 == 1 { *p } else { -*p };
                bits >>= 1;
            }
            x
        })
        .collect();

    let coarse_exponent = scale_exponent / 2;
    let fine = (-(scale_exponent as f64)).exp2();
    let coarse = (-(coarse_exponent as f64)).exp2();
    let (fine_ids, fine_bins) = dense_bins(&xs, fine);
    let (coarse_ids, coarse_bins) = dense_bins(&xs, coarse);
    let span = (scale_exponent - coarse_exponent) as f64 * std::f64::consts::LN_2;
    let fine_entropy = entropy_of(&fine_ids, fine_bins, 0..sample_count);
    let coarse_entropy = entropy_of(&coarse_ids, coarse_bins, 0..sample_count);
    let value = (fine_entropy - coarse_entropy) / span;

    let mut boot = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut reps = Vec::with_capacity(BOOTSTRAP_ROUNDS);
    for _ in 0..BOOTSTRAP_ROUNDS {
        let pick: Vec<usize> = (0..sample_count).map(|_| boot.gen_range(0..sample_count)).collect();
        let hf = entropy_of(&fine_ids, fine_bins, pick.iter().copied());
        let hc = entropy_of(&coarse_ids, coarse_bins, pick.iter().copied());
        reps.push((hf - hc) / span);
    }
    let mean = reps.iter().sum::<f64>() / reps.len() as f64;
    let var = reps.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps.len() - 1) as f64;

    Ok(BoxEntropy {
        lambda: lam,
        n,
        sample_count,
        scale_exponent,
        coarse_exponent,
        seed,
        truncation_error,
        fine_entropy,
        coarse_entropy,
        bootstrap_rounds: BOOTSTRAP_ROUNDS,
        estimate: Estimate::uncertified(value, var.sqrt()),
    })
}
