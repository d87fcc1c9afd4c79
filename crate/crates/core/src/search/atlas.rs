use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::numeric::{AlgebraicNumber, Dyadic, IntPolynomial, Interval};

#[derive(Clone, Debug, Serialize)]
pub struct AtlasRoot {
    pub enclosure: Interval,
    /// Lowest-degree enumerated polynomial with this root, `P(0) = 1`.
    pub poly: IntPolynomial,
    /// The root with its smallest known defining polynomial.
    pub value: AlgebraicNumber,
    /// Number of enumerated polynomials sharing this root.
    pub sources: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootAtlas {
    pub n_max: usize,
    pub region: (String, String),
    pub prec: u32,
    pub roots: Vec<AtlasRoot>,
    pub min_gap: Option<Interval>,
    pub min_gap_pair: Option<(usize, usize)>,
    /// Enclosure of `gap^{-1/n_max}`.
    pub implied_c: Option<(f64, f64)>,
    /// Nonconstant polynomials enumerated after normalization.
    pub polynomial_count: u64,
    pub polynomials_with_roots: u64,
    /// `n · 3^{n+1}`.
    pub count_bound: u128,
}

/// `1 + Σ aᵢxⁱ` for the base-3 digits of `code`.
fn normalized(code: u64, n: usize) -> IntPolynomial {
    let mut c = vec![BigInt::from(1)];
    let mut k = code;
    for _ in 0..n {
        c.push(BigInt::from((k % 3) as i64 - 1));
        k /= 3;
    }
    IntPolynomial::new(c)
}

fn key(p: &IntPolynomial) -> (usize, Vec<BigInt>) {
    (p.degree(), p.coeffs().to_vec())
}

/// Every real root in `(lo, hi)` of a nonzero `{−1, 0, 1}` polynomial of
/// degree at most `n_max`, up to sign and powers of `x`, without repeats.
pub fn root_atlas(n_max: usize, lo: &BigRational, hi: &BigRational, prec: u32) -> Result<RootAtlas, Error> {
    if n_max == 0 || n_max > 12 {
        return Err(Error::Precondition(format!("n_max must lie in 1..=12, got {n_max}")));
    }
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    if !(lo > &zero && lo < hi && hi <= &one) {
        return Err(Error::Domain(format!("region ({lo}, {hi}) must sit inside (0, 1) away from 0")));
    }
    let prec = prec.max(16);
    let (dlo, dhi) = (Dyadic::from_rational_floor(lo, 64), Dyadic::from_rational_ceil(hi, 64));
    let total = 3u64.pow(n_max as u32);
    // all digits 1 means every aᵢ = 0, the constant polynomial
    let constant = (0..n_max).fold(0u64, |acc, _| acc * 3 + 1);
    let found: Vec<(AlgebraicNumber, IntPolynomial)> = (0..total)
        .into_par_iter()
        .filter(|&c| c != constant)
        .map(|c| {
            let p = normalized(c, n_max);
            let roots = AlgebraicNumber::roots_in_open(&p, &dlo, &dhi).unwrap_or_default();
            roots.into_iter().filter(|r| r.inside_open(lo, hi)).map(|r| (r.refined(64), p.clone())).collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    let with_roots = {
        let mut ps: Vec<_> = found.iter().map(|(_, p)| key(p)).collect();
        ps.sort();
        ps.dedup();
        ps.len() as u64
    };

    let mut items: Vec<(AlgebraicNumber, IntPolynomial, usize)> = found.into_iter().map(|(a, p)| (a, p, 1)).collect();
    loop {
        items.sort_by(|a, b| a.0.isolator().lo().cmp(b.0.isolator().lo()).then_with(|| key(&a.1).cmp(&key(&b.1))));
        let mut changed = false;
        let mut out: Vec<(AlgebraicNumber, IntPolynomial, usize)> = Vec::with_capacity(items.len());
        for it in items {
            if let Some(last) = out.last_mut() {
                if last.0.isolator().overlaps(&it.0.isolator()) {
                    changed = true;
                    if last.0.equals(&it.0) {
                        let g = last.0.defining().gcd(it.0.defining());
                        if let Ok(a) = last.0.with_factor(&g) {
                            last.0 = a;
                        }
                        if key(&it.1) < key(&last.1) {
                            last.1 = it.1;
                        }
                        last.2 += it.2;
                        continue;
                    }
                    let bits = |a: &AlgebraicNumber| {
                        let w = a.isolator().width();
                        if w.is_zero() { 64 } else { (8 - w.top()).max(64) as u32 }
                    };
                    last.0 = last.0.refined(bits(&last.0));
                    let r = it.0.refined(bits(&it.0));
                    out.push((r, it.1, it.2));
                    continue;
                }
            }
            out.push(it);
        }
        items = out;
        if !changed {
            break;
        }
    }

    let roots: Vec<AtlasRoot> = items
        .into_par_iter()
        .map(|(a, poly, sources)| {
            let value = a.refined(prec);
            AtlasRoot { enclosure: value.isolator().with_prec(prec + 64), poly, value, sources }
        })
        .collect();
    let mut min_gap: Option<Interval> = None;
    let mut pair = None;
    for i in 1..roots.len() {
        let g = roots[i].enclosure.sub(&roots[i - 1].enclosure);
        if min_gap.as_ref().map_or(true, |m| g.lo() < m.lo()) {
            pair = Some((i - 1, i));
        }
        min_gap = Some(match min_gap {
            None => g,
            Some(m) => m.min(&g),
        });
    }
    let implied_c = min_gap.as_ref().map(|g| {
        let e = -1.0 / n_max as f64;
        (g.hi_f64().powf(e) * (1.0 - 1e-12), g.lo_f64().powf(e) * (1.0 + 1e-12))
    });
    Ok(RootAtlas {
        n_max,
        region: (lo.to_string(), hi.to_string()),
        prec,
        roots,
        min_gap,
        min_gap_pair: pair,
        implied_c,
        polynomial_count: total - 1,
        polynomials_with_roots: with_roots,
        count_bound: n_max as u128 * 3u128.pow(n_max as u32 + 1),
    })
}
