use bernoulli_core::numeric::{AlgebraicNumber, Dyadic, IntPolynomial, Interval};
use bernoulli_core::search::{
    min_abs_value, min_nonzero_abs_value, root_atlas, separation_check, verify_garsia_bound, BoundVerdict, CoeffClass,
    Mode, SeparationVerdict,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn root(c: &[i64], lo: BigRational, hi: BigRational) -> AlgebraicNumber {
    AlgebraicNumber::root_in(&IntPolynomial::from_i64s(c), &lo, &hi).unwrap()
}

fn golden() -> AlgebraicNumber {
    root(&[-1, 1, 1], q(1, 2), q(1, 1))
}

fn allowed(class: CoeffClass, j: usize) -> bool {
    class == CoeffClass::Full || j % 3 != 2
}

/// Exact minimum of `|P(λ)|` over every nonzero vector, by enumeration.
fn exact_min(lambda: &BigRational, n: usize, class: CoeffClass) -> BigRational {
    let mut best: Option<BigRational> = None;
    for code in 0..3u64.pow(n as u32 + 1) {
        let mut k = code;
        let mut v = BigRational::zero();
        let mut pw = BigRational::from_integer(1.into());
        let mut nonzero = false;
        let mut ok = true;
        for j in 0..=n {
            let a = (k % 3) as i64 - 1;
            k /= 3;
            if a != 0 {
                if !allowed(class, j) {
                    ok = false;
                    break;
                }
                nonzero = true;
                v += &pw * BigRational::from_integer(a.into());
            }
            pw *= lambda;
        }
        if ok && nonzero {
            let a = v.abs();
            if best.as_ref().map_or(true, |b| &a < b) {
                best = Some(a);
            }
        }
    }
    best.unwrap()
}

fn exact_value(p: &IntPolynomial, lambda: &BigRational) -> BigRational {
    p.eval_rational(lambda).abs()
}

#[test]
fn half_minimum_is_two_to_minus_n() {
    let lam = Interval::from_rational(&q(1, 2), 128);
    let r = min_abs_value(&lam, 8, CoeffClass::Full, Mode::Pruned).unwrap();
    assert!(r.min_value.is_point());
    assert_eq!(r.min_value.lo(), &Dyadic::pow2(-8));
    assert_eq!(exact_value(&r.argmin, &q(1, 2)), q(1, 256));
}

#[test]
fn golden_minimal_polynomial_is_found() {
    let lam = golden().enclosure(100);
    let r = min_abs_value(&lam, 2, CoeffClass::Full, Mode::Exhaustive).unwrap();
    assert!(r.min_value.contains_zero());
    assert_eq!(r.argmin, IntPolynomial::from_i64s(&[-1, 1, 1]));
}

#[test]
fn pruned_matches_exhaustive_at_six_tenths() {
    let lam = Interval::from_rational(&q(3, 5), 128);
    let a = min_abs_value(&lam, 6, CoeffClass::Full, Mode::Pruned).unwrap();
    let b = min_abs_value(&lam, 6, CoeffClass::Full, Mode::Exhaustive).unwrap();
    assert_eq!(a.min_value, b.min_value);
    assert_eq!(a.argmin, b.argmin);
    assert!(a.nodes < b.nodes);
    let m = exact_min(&q(3, 5), 6, CoeffClass::Full);
    assert!(a.min_value.contains_rational(&m));
}

#[test]
fn rational_oracle_grid() {
    let lams = [q(13, 25), q(3, 5), q(309, 500), q(33, 50), q(7, 10)];
    for lam in &lams {
        let li = Interval::from_rational(lam, 128);
        for class in [CoeffClass::Full, CoeffClass::QTrimmed] {
            for n in 0..=7 {
                let m = exact_min(lam, n, class);
                let r = min_abs_value(&li, n, class, Mode::Pruned).unwrap();
                assert!(r.min_value.contains_rational(&m), "{lam} {class:?} n={n}");
                assert!(r.min_value.contains_rational(&exact_value(&r.argmin, lam)));
                for (j, c) in r.argmin.coeffs().iter().enumerate() {
                    assert!(c.abs() <= BigInt::from(1));
                    assert!(allowed(class, j) || c.is_zero());
                }
            }
        }
    }
}

#[test]
fn pruned_equals_exhaustive_grid() {
    for lam in [0.52, 0.6, 0.618, 0.66, 0.7] {
        let li = Interval::from_f64_bounds(lam, lam);
        for class in [CoeffClass::Full, CoeffClass::QTrimmed] {
            for n in 0..=10 {
                let a = min_abs_value(&li, n, class, Mode::Pruned).unwrap();
                let b = min_abs_value(&li, n, class, Mode::Exhaustive).unwrap();
                assert_eq!((&a.min_value, &a.argmin), (&b.min_value, &b.argmin), "{lam} {class:?} {n}");
                if n >= 8 {
                    assert!(a.nodes < b.nodes);
                }
            }
        }
    }
}

#[test]
fn trimmed_class_minimum_dominates() {
    for lam in [0.55, 0.6, 0.65, 0.7] {
        let li = Interval::from_f64_bounds(lam, lam);
        for n in 1..=12 {
            let f = min_abs_value(&li, n, CoeffClass::Full, Mode::Pruned).unwrap();
            let t = min_abs_value(&li, n, CoeffClass::QTrimmed, Mode::Pruned).unwrap();
            assert!(t.min_value.hi() >= f.min_value.lo());
        }
    }
}

#[test]
fn nonzero_minimum_excludes_the_minimal_polynomial() {
    let r = min_nonzero_abs_value(&golden(), 4, CoeffClass::Full, Mode::Pruned).unwrap();
    assert!(r.excluded_zero);
    assert!(r.min_value.is_positive());
}

#[test]
fn garsia_half_is_sharp() {
    let rep = verify_garsia_bound(&AlgebraicNumber::from_rational(&q(1, 2)), 12).unwrap();
    assert_eq!(rep.verdict, BoundVerdict::Holds);
    for row in &rep.rows {
        assert!(row.search.min_value.is_point());
        assert_eq!(row.search.min_value.lo(), &Dyadic::pow2(-(row.n as i64)));
        assert_eq!(row.bound.lo(), &Dyadic::pow2(-(row.n as i64)));
        assert!(row.identity.as_ref().unwrap().ok);
    }
}

#[test]
fn garsia_golden_and_plastic() {
    for xi in [golden(), root(&[-1, 0, 1, 1], q(0, 1), q(1, 1))] {
        let rep = verify_garsia_bound(&xi, 12).unwrap();
        assert_eq!(rep.verdict, BoundVerdict::Holds, "{:?}", xi.defining());
        for row in &rep.rows {
            let id = row.identity.as_ref().unwrap();
            assert!(id.ok, "n={} {:?}", row.n, id);
        }
    }
}

#[test]
fn separation_golden_passes() {
    let rep = separation_check(&golden(), 14, 8).unwrap();
    assert_eq!(rep.class, CoeffClass::Full);
    assert_eq!(rep.samples.len(), 16);
    assert_eq!(rep.verdict, SeparationVerdict::Pass);
    assert!(rep.samples.iter().all(|s| s.distance.lo() >= rep.inner_radius.hi()));
}

#[test]
fn separation_guard_and_trimmed_class() {
    let err = separation_check(&golden(), 13, 8).unwrap_err().to_string();
    assert!(err.contains("10 d log d"), "{err}");
    let two_thirds = AlgebraicNumber::from_rational(&q(2, 3));
    let rep = separation_check(&two_thirds, 10, 4).unwrap();
    assert_eq!(rep.class, CoeffClass::QTrimmed);
    assert_eq!(rep.samples.len(), 8);
    let inner = Interval::from_rational(&q(1, 15), 128).powi(10);
    assert!(rep.inner_radius.overlaps(&inner));
    let third = AlgebraicNumber::from_rational(&q(1, 3));
    assert!(separation_check(&third, 10, 4).is_err());
}

#[test]
fn atlas_small() {
    let a = root_atlas(2, &q(1, 2), &q(1, 1), 128).unwrap();
    assert!(a.roots.iter().any(|r| r.value.equals(&golden())));
    assert!((a.roots.len() as u128) <= a.count_bound);
    assert!((a.polynomial_count as u128) <= a.count_bound);
    assert!(root_atlas(2, &q(0, 1), &q(1, 2), 128).is_err());
}

#[test]
fn atlas_gap_is_stable_under_precision() {
    let a = root_atlas(6, &q(1, 2), &q(1, 1), 128).unwrap();
    let b = root_atlas(6, &q(1, 2), &q(1, 1), 256).unwrap();
    assert_eq!(a.roots.len(), b.roots.len());
    let (ga, gb) = (a.min_gap.unwrap(), b.min_gap.unwrap());
    assert!(ga.overlaps(&gb));
    assert!(ga.is_positive());
    for w in a.roots.windows(2) {
        assert!(w[0].enclosure.hi() < w[1].enclosure.lo());
    }
    // an independent float scan of every polynomial finds no root the atlas missed
    let mut count = 0;
    for code in 0..3u64.pow(6) {
        let c: Vec<f64> = std::iter::once(1.0).chain((0..6).map(|i| ((code / 3u64.pow(i)) % 3) as f64 - 1.0)).collect();
        let f = |x: f64| c.iter().rev().fold(0.0, |acc, &a| acc * x + a);
        let mut prev = f(0.5 + 1e-9);
        for k in 1..=4000 {
            let x = 0.5 + 0.5 * k as f64 / 4000.0 - 1e-9;
            let v = f(x);
            if (v < 0.0) != (prev < 0.0) {
                assert!(a.roots.iter().any(|r| (r.enclosure.mid_f64() - x).abs() < 2e-4), "{c:?} near {x}");
                count += 1;
            }
            prev = v;
        }
    }
    assert!(count > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pruning_is_admissible(lam in 0.5f64..0.75, n in 0usize..8, trimmed in any::<bool>(), seed in any::<u64>()) {
        let class = if trimmed { CoeffClass::QTrimmed } else { CoeffClass::Full };
        let li = Interval::from_f64_bounds(lam, lam);
        let a = min_abs_value(&li, n, class, Mode::Pruned).unwrap();
        let b = min_abs_value(&li, n, class, Mode::Exhaustive).unwrap();
        prop_assert_eq!(&a.min_value, &b.min_value);
        prop_assert_eq!(&a.argmin, &b.argmin);
        // random restarts never beat the reported minimum
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let c: Vec<f64> = (0..=n).map(|j| if allowed(class, j) { rng.gen_range(-1i32..=1) as f64 } else { 0.0 }).collect();
            if c.iter().all(|&x| x == 0.0) {
                continue;
            }
            let v = c.iter().rev().fold(0.0, |acc, &x| acc * lam + x).abs();
            prop_assert!(v >= a.min_value.lo_f64() - 1e-12);
        }
    }

    #[test]
    fn search_is_deterministic(lam in 0.5f64..0.75, n in 0usize..9) {
        let li = Interval::from_f64_bounds(lam, lam);
        let a = min_abs_value(&li, n, CoeffClass::Full, Mode::Pruned).unwrap();
        let b = min_abs_value(&li, n, CoeffClass::Full, Mode::Pruned).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
