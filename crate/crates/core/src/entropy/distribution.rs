//! The exact law of `Σ ±λⁿ` as a sorted table of residue vectors.
//!
//! Every value is an element of `Q[x]/(p)`. Keys store its coordinates
//! multiplied by a common denominator `D`, as `dim` consecutive `i128`s, and
//! the table is kept in lexicographic key order. Translation by `±r` and
//! rescaling by a positive integer both preserve that order, so one DP step
//! is a linear merge of two shifted copies of the table.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::Error;
use crate::numeric::{IntPolynomial, RationalVector};

/// Default cap on the number of distinct values.
pub const DEFAULT_CAP: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDistribution {
    modulus: IntPolynomial,
    dim: usize,
    denom: BigInt,
    keys: Vec<i128>,
    counts: Vec<u64>,
    steps: Vec<usize>,
}

fn cmp_keys(a: &[i128], b: &[i128]) -> Ordering {
    a.cmp(b)
}

fn overflow(steps: usize, entries: usize, what: &str) -> Error {
    Error::TableCap { steps, entries, reason: format!("{what} overflow") }
}

impl ValueDistribution {
    /// The point mass at zero (no steps consumed).
    pub fn new(modulus: &IntPolynomial) -> Self {
        let dim = modulus.degree();
        assert!(dim >= 1, "modulus must have degree at least 1");
        ValueDistribution {
            modulus: modulus.clone(),
            dim,
            denom: BigInt::one(),
            keys: vec![0; dim],
            counts: vec![1],
            steps: Vec::new(),
        }
    }

    /// Builds a table from explicit `(value, count)` pairs.
    pub fn from_entries(modulus: &IntPolynomial, steps: Vec<usize>, entries: &BTreeMap<RationalVector, BigUint>) -> Result<Self, Error> {
        let dim = modulus.degree();
        let denom = entries
            .keys()
            .flat_map(|v| v.coords().iter().map(|c| c.denom().clone()))
            .fold(BigInt::one(), |l, d| l.lcm(&d));
        let mut rows: Vec<(Vec<i128>, u64)> = Vec::with_capacity(entries.len());
        for (v, c) in entries {
            assert_eq!(v.len(), dim, "residue length must match the modulus degree");
            let key = scale_to_ints(v, &denom).ok_or_else(|| overflow(steps.len(), entries.len(), "key"))?;
            let c = c.to_u64().ok_or_else(|| overflow(steps.len(), entries.len(), "count"))?;
            rows.push((key, c));
        }
        rows.sort_by(|a, b| cmp_keys(&a.0, &b.0));
        let mut keys = Vec::with_capacity(rows.len() * dim);
        let mut counts = Vec::with_capacity(rows.len());
        for (k, c) in rows {
            keys.extend_from_slice(&k);
            counts.push(c);
        }
        Ok(ValueDistribution { modulus: modulus.clone(), dim, denom, keys, counts, steps })
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn key(&self, i: usize) -> &[i128] {
        &self.keys[i * self.dim..(i + 1) * self.dim]
    }

    /// Exact total mass, `2^steps` for any table built by shifting.
    pub fn total(&self) -> BigUint {
        self.counts.iter().map(|&c| BigUint::from(c)).sum()
    }

    /// The table as an ordered map of exact residues.
    pub fn to_map(&self) -> BTreeMap<RationalVector, BigUint> {
        (0..self.len())
            .map(|i| {
                let v = RationalVector::new(
                    self.key(i).iter().map(|&k| BigRational::new(BigInt::from(k), self.denom.clone())).collect(),
                );
                (v, BigUint::from(self.counts[i]))
            })
            .collect()
    }

    /// True when negating every value maps the table onto itself.
    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let j = n - 1 - i;
            self.counts[i] == self.counts[j] && self.key(i).iter().zip(self.key(j)).all(|(a, b)| *a == -*b)
        })
    }

    /// One DP step: each value `v` with count `c` spawns `v + r` and `v − r`,
    /// merged by exact equality. `index` is recorded as the consumed index.
    pub fn shift(&self, index: usize, r: &RationalVector, cap: usize) -> Result<ValueDistribution, Error> {
        assert_eq!(r.len(), self.dim, "residue length must match the modulus degree");
        let nsteps = self.steps.len() + 1;
        let err = |what: &str| overflow(nsteps, self.len(), what);
        let rden = r.coords().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let denom = self.denom.lcm(&rden);
        let factor = (&denom / &self.denom).to_i128().ok_or_else(|| err("key"))?;
        let rk = scale_to_ints(r, &denom).ok_or_else(|| err("key"))?;
        let keys: Vec<i128> = if factor == 1 {
            self.keys.clone()
        } else {
            self.keys.iter().map(|k| k.checked_mul(factor)).collect::<Option<_>>().ok_or_else(|| err("key"))?
        };
        let d = self.dim;
        let n = self.len();
        let shifted = |i: usize, sign: i128| -> Option<Vec<i128>> {
            (0..d).map(|t| keys[i * d + t].checked_add(sign * rk[t])).collect()
        };
        let mut out_keys: Vec<i128> = Vec::with_capacity((2 * n * d).min(cap.saturating_mul(d)));
        let mut out_counts: Vec<u64> = Vec::with_capacity((2 * n).min(cap));
        let (mut a, mut b) = (0usize, 0usize);
        let mut ka = if n > 0 { shifted(0, -1) } else { None };
        let mut kb = if n > 0 { shifted(0, 1) } else { None };
        let push = |k: &[i128], c: u64, keys: &mut Vec<i128>, counts: &mut Vec<u64>| -> Result<(), Error> {
            let len = counts.len();
            if len > 0 && keys[(len - 1) * d..] == *k {
                counts[len - 1] = counts[len - 1].checked_add(c).ok_or_else(|| err("count"))?;
            } else {
                if len >= cap {
                    return Err(Error::TableCap { steps: nsteps, entries: len, reason: format!("table cap {cap} reached") });
                }
                keys.extend_from_slice(k);
                counts.push(c);
            }
            Ok(())
        };
        while a < n || b < n {
            if a < n && ka.is_none() || b < n && kb.is_none() {
                return Err(err("key"));
            }
            let take_a = match (a < n, b < n) {
                (true, true) => cmp_keys(ka.as_ref().unwrap(), kb.as_ref().unwrap()) != Ordering::Greater,
                (true, false) => true,
                _ => false,
            };
            if take_a {
                push(ka.as_ref().unwrap(), self.counts[a], &mut out_keys, &mut out_counts)?;
                a += 1;
                ka = if a < n { shifted(a, -1) } else { None };
            } else {
                push(kb.as_ref().unwrap(), self.counts[b], &mut out_keys, &mut out_counts)?;
                b += 1;
                kb = if b < n { shifted(b, 1) } else { None };
            }
        }
        let mut steps = self.steps.clone();
        steps.push(index);
        Ok(ValueDistribution { modulus: self.modulus.clone(), dim: d, denom, keys: out_keys, counts: out_counts, steps })
    }

    /// `count → number of values with that count`.
    pub fn count_histogram(&self) -> BTreeMap<u64, u64> {
        let mut h = BTreeMap::new();
        for &c in &self.counts {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }
}

fn scale_to_ints(v: &RationalVector, denom: &BigInt) -> Option<Vec<i128>> {
    v.coords()
        .iter()
        .map(|c| {
            let s = c * BigRational::from_integer(denom.clone());
            debug_assert!(s.is_integer());
            s.to_integer().to_i128()
        })
        .collect()
}

/// One DP step with the default cap.
pub fn shift_distribution(dist: &ValueDistribution, power_residue: &RationalVector) -> Result<ValueDistribution, Error> {
    let next = dist.steps.last().map_or(0, |s| s + 1);
    dist.shift(next, power_residue, DEFAULT_CAP)
}
