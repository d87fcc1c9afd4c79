use std::collections::HashMap;

use serde::Serialize;

use super::distribution::{ValueDistribution, DEFAULT_CAP};
use crate::error::Error;
use crate::numeric::interval::ln2;
use crate::numeric::residue::power_residues;
use crate::numeric::{AlgebraicNumber, Interval};

const PREC: u32 = 128;

/// Which indices `n` contribute a term `±λⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IndexFilter {
    All,
    /// Drops every `n` with `3 | n − 2`.
    Trimmed,
}

impl IndexFilter {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            IndexFilter::All => true,
            IndexFilter::Trimmed => n % 3 != 2,
        }
    }

    /// The first `count` accepted indices.
    pub fn indices(self, count: usize) -> Vec<usize> {
        (0..).filter(|&n| self.accepts(n)).take(count).collect()
    }
}

/// `Σ c log2 c` over a count histogram, with a cache of logarithms.
#[derive(Default)]
struct LogCache {
    logs: HashMap<u64, Interval>,
}

impl LogCache {
    fn c_log2_c(&mut self, c: u64) -> Interval {
        if c <= 1 {
            return Interval::zero(PREC);
        }
        let l = self
            .logs
            .entry(c)
            .or_insert_with(|| Interval::from_int(c, PREC).log2().expect("positive count"))
            .clone();
        l.mul(&Interval::from_int(c, PREC))
    }

    fn entropy_bits(&mut self, dist: &ValueDistribution) -> Interval {
        let n = dist.steps().len() as i64;
        let mut s = Interval::zero(PREC);
        for (c, mult) in dist.count_histogram() {
            if c > 1 {
                s = s.add(&self.c_log2_c(c).mul(&Interval::from_int(mult, PREC)));
            }
        }
        // H = N − 2^-N Σ c log2 c
        let scaled = Interval::new(s.lo().mul_pow2(-n), s.hi().mul_pow2(-n), PREC);
        Interval::from_int(n, PREC).sub(&scaled)
    }
}

/// Shannon entropy in bits; exact whenever every count is a power of two.
pub fn entropy_bits(dist: &ValueDistribution) -> Interval {
    LogCache::default().entropy_bits(dist)
}

/// Shannon entropy `−Σ p ln p` in nats, `p = count / 2^N`.
pub fn entropy(dist: &ValueDistribution) -> Interval {
    entropy_bits(dist).mul(&ln2(PREC))
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyEntry {
    /// Number of consumed indices.
    pub n: usize,
    /// One past the largest consumed index.
    pub ambient: usize,
    pub h: Interval,
    pub h_bits: Interval,
    pub table_size: usize,
}

impl EntropyEntry {
    /// `H_N / N` in nats.
    pub fn ratio(&self) -> Interval {
        self.h.div_int(self.n as i64)
    }

    pub fn ratio_bits(&self) -> Interval {
        self.h_bits.div_int(self.n as i64)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Truncation {
    pub at_n: usize,
    pub table_size: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropySeries {
    pub lambda: AlgebraicNumber,
    pub filter: IndexFilter,
    pub cap: usize,
    pub entries: Vec<EntropyEntry>,
    pub truncated: Option<Truncation>,
}

impl EntropySeries {
    pub fn is_truncated(&self) -> bool {
        self.truncated.is_some()
    }

    pub fn last(&self) -> Option<&EntropyEntry> {
        self.entries.last()
    }

    /// Pairs `(N, M)` with `N + M` stored and
    /// `H_{N+M} > H_N + H_M + 2·(widths)`.
    pub fn subadditivity_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let by_n: HashMap<usize, &EntropyEntry> = self.entries.iter().map(|e| (e.n, e)).collect();
        for a in &self.entries {
            for b in &self.entries {
                if b.n < a.n {
                    continue;
                }
                if let Some(s) = by_n.get(&(a.n + b.n)) {
                    let slack = 2.0 * (a.h.width_f64() + b.h.width_f64() + s.h.width_f64());
                    if s.h.lo_f64() > a.h.hi_f64() + b.h.hi_f64() + slack {
                        out.push((a.n, b.n));
                    }
                }
            }
        }
        out
    }
}

/// `H_N` for `N = 1..=n_max` with the default table cap.
pub fn entropy_series(lambda: &AlgebraicNumber, n_max: usize, filter: IndexFilter) -> Result<EntropySeries, Error> {
    entropy_series_with_cap(lambda, n_max, filter, DEFAULT_CAP)
}

/// As [`entropy_series`]; stops early with a flagged truncation when the table
/// would exceed `cap` entries or its keys or counts would overflow.
pub fn entropy_series_with_cap(
    lambda: &AlgebraicNumber,
    n_max: usize,
    filter: IndexFilter,
    cap: usize,
) -> Result<EntropySeries, Error> {
    if n_max == 0 {
        return Err(Error::Precondition("N_max must be at least 1".into()));
    }
    let modulus = lambda.defining();
    let indices = filter.indices(n_max);
    let residues = power_residues(modulus, indices.last().copied().unwrap_or(0) + 1);
    let mut dist = ValueDistribution::new(modulus);
    let mut logs = LogCache::default();
    let mut entries = Vec::with_capacity(n_max);
    let mut truncated = None;
    let l2 = ln2(PREC);
    for &idx in &indices {
        match dist.shift(idx, &residues[idx], cap) {
            Ok(next) => dist = next,
            Err(Error::TableCap { steps, entries: size, reason }) => {
                truncated = Some(Truncation { at_n: steps, table_size: size, reason });
                break;
            }
            Err(e) => return Err(e),
        }
        let h_bits = logs.entropy_bits(&dist);
        entries.push(EntropyEntry {
            n: dist.steps().len(),
            ambient: idx + 1,
            h: h_bits.mul(&l2),
            h_bits,
            table_size: dist.len(),
        });
    }
    Ok(EntropySeries { lambda: lambda.clone(), filter, cap, entries, truncated })
}

/// `min_N H_N / N`, an upper bound for the Garsia entropy by subadditivity.
pub fn garsia_upper_bound(series: &EntropySeries) -> Result<Interval, Error> {
    if series.filter != IndexFilter::All {
        return Err(Error::Precondition("the Fekete bound needs the untrimmed series".into()));
    }
    series
        .entries
        .iter()
        .map(EntropyEntry::ratio)
        .reduce(|a, b| a.min(&b))
        .ok_or_else(|| Error::Precondition("empty entropy series".into()))
}

/// An uncertified point estimate with its observed spread.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub spread: f64,
    pub label: &'static str,
}

impl Estimate {
    pub fn uncertified(value: f64, spread: f64) -> Self {
        Estimate { value, spread, label: "UNCERTIFIED" }
    }
}

/// Mean of the last few increments `H_N − H_{N−1}`, with their range as the
/// spread.
pub fn garsia_estimate(series: &EntropySeries) -> Result<Estimate, Error> {
    let e = &series.entries;
    if e.len() < 4 {
        return Err(Error::Precondition(format!("need at least 4 entries, got {}", e.len())));
    }
    let k = (e.len() - 1).min(4);
    let diffs: Vec<f64> = (e.len() - k..e.len())
        .map(|i| e[i].h_bits.mid_f64() - e[i - 1].h_bits.mid_f64())
        .collect();
    let mean = diffs.iter().sum::<f64>() / k as f64;
    let lo = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ln2 = std::f64::consts::LN_2;
    Ok(Estimate::uncertified(mean * ln2, (hi - lo) * ln2))
}
