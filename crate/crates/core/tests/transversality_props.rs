use bernoulli_core::transversality::{
    certify, decay_check, two_pow_minus_two_thirds_up, verify_witness, Budget, SeriesClass, Status,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DELTA: f64 = 1.0 / 16.0;

fn admits(class: SeriesClass, n: usize) -> bool {
    match class {
        SeriesClass::Full => n >= 1,
        SeriesClass::Skip(i) => n >= 1 && (n as i64 - i as i64).rem_euclid(3) != 0,
    }
}

/// Random member truncated at degree `k`, constant term 1.
fn random_prefix(rng: &mut ChaCha8Rng, class: SeriesClass, k: usize) -> Vec<f64> {
    (0..=k)
        .map(|n| if n == 0 { 1.0 } else if admits(class, n) { rng.gen_range(-1i32..=1) as f64 } else { 0.0 })
        .collect()
}

fn eval(c: &[f64], x: f64) -> (f64, f64) {
    let mut f = 0.0;
    let mut df = 0.0;
    for &a in c.iter().rev() {
        df = df * x + f;
        f = f * x + a;
    }
    (f, df)
}

/// Worst-case tail by direct summation; 400 terms leave nothing at x ≤ 0.71.
fn tail(class: SeriesClass, k: usize, x: f64) -> (f64, f64) {
    let mut t = 0.0;
    let mut d = 0.0;
    for n in k + 1..k + 400 {
        if admits(class, n) {
            t += x.powi(n as i32);
            d += n as f64 * x.powi(n as i32 - 1);
        }
    }
    (t, d)
}

#[test]
fn soundness_sampling() {
    let x0 = two_pow_minus_two_thirds_up();
    for class in [SeriesClass::Full, SeriesClass::Skip(1), SeriesClass::Skip(2)] {
        let out = certify(class, x0, DELTA, &Budget::default()).unwrap();
        assert_eq!(out.status, Status::Certified, "{class:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let k = rng.gen_range(0..40);
            let c = random_prefix(&mut rng, class, k);
            let x = rng.gen_range(0.0..=x0);
            let (f, df) = eval(&c, x);
            let (t, d) = tail(class, k, x);
            let eps = 1e-12;
            // no completion of the prefix may be proved to violate the implication
            assert!(!(f + t + eps < DELTA && df - d - eps >= -DELTA), "{class:?} {c:?} at {x}");
            // the truncated polynomial itself is a member
            if f < DELTA - eps {
                assert!(df < -DELTA + eps, "{class:?} {c:?} at {x}");
            }
        }
    }
}

#[test]
fn at_most_one_zero() {
    let x0 = two_pow_minus_two_thirds_up();
    let out = certify(SeriesClass::Full, x0, DELTA, &Budget::default()).unwrap();
    assert_eq!(out.status, Status::Certified);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let c = random_prefix(&mut rng, SeriesClass::Full, 40);
        let mut changes = 0;
        let mut prev = eval(&c, 0.0).0;
        for i in 1..=1000 {
            let v = eval(&c, x0 * i as f64 / 1000.0).0;
            if (v < 0.0) != (prev < 0.0) {
                changes += 1;
            }
            prev = v;
        }
        assert!(changes <= 1, "{c:?}");
    }
}

#[test]
fn counterexample_witness_reverifies() {
    let out = certify(SeriesClass::Full, 0.71, 0.01, &Budget::default()).unwrap();
    assert_eq!(out.status, Status::Counterexample);
    let w = out.witness.unwrap();
    assert!(w.verified && verify_witness(&w.coeffs, w.x, 0.01));
    let c: Vec<f64> = w.coeffs.iter().map(|&a| a as f64).collect();
    let (f, df) = eval(&c, w.x);
    assert!(f < 0.01 && df >= -0.01);
    assert!(w.x <= 0.71 && w.x > std::f64::consts::FRAC_1_SQRT_2 - 0.05);
}

#[test]
fn determinism_and_digest() {
    let x0 = two_pow_minus_two_thirds_up();
    let a = certify(SeriesClass::Full, x0, DELTA, &Budget::default()).unwrap();
    let b = certify(SeriesClass::Full, x0, DELTA, &Budget::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.digest.len(), 64);
    let json = serde_json::to_string(&a).unwrap();
    assert!(json.contains("\"class\":\"P\""));
    let back: bernoulli_core::transversality::TransversalityOutcome = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
}

#[test]
fn tiny_budget_is_inconclusive() {
    let x0 = two_pow_minus_two_thirds_up();
    let out = certify(SeriesClass::Full, x0, DELTA, &Budget { max_nodes: 50 }).unwrap();
    assert_eq!(out.status, Status::Inconclusive);
}

#[test]
fn decay_along_all_minus_series() {
    let x0 = two_pow_minus_two_thirds_up();
    let cert = certify(SeriesClass::Full, x0, 0.1, &Budget::default()).unwrap();
    assert_eq!(cert.status, Status::Certified);
    let mut prefix = vec![-1i8; 41];
    prefix[0] = 1;
    let rep = decay_check(&prefix, &cert, 0.5, x0, 200).unwrap();
    assert!(rep.ok, "{:?}", rep.violations);
    assert_eq!(rep.samples, 200);
    // f(0.3) is well above δ
    assert!(decay_check(&prefix, &cert, 0.3, x0, 10).is_err());
    let single = decay_check(&prefix, &cert, 0.55, 0.55, 10).unwrap();
    assert_eq!(single.samples, 1);
    assert!(single.ok);
    assert!(decay_check(&prefix, &cert, 0.5, 0.7, 10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn monotone_hardness(shrink in 0.3f64..1.0, which in 0usize..3) {
        let class = [SeriesClass::Full, SeriesClass::Skip(1), SeriesClass::Skip(2)][which];
        let x0 = two_pow_minus_two_thirds_up();
        let out = certify(class, x0 * shrink, DELTA, &Budget::default()).unwrap();
        prop_assert_eq!(out.status, Status::Certified);
    }

    #[test]
    fn tail_dominates_random_completions(k in 0usize..20, x in 0.0f64..0.7, seed in any::<u64>(), which in 0usize..3) {
        let class = [SeriesClass::Full, SeriesClass::Skip(1), SeriesClass::Skip(2)][which];
        let (t, d) = bernoulli_core::transversality::class_tail_bound(class, k, x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = 0.0;
        let mut ds = 0.0;
        for n in k + 1..k + 300 {
            if admits(class, n) {
                let a = rng.gen_range(-1i32..=1) as f64;
                s += a * x.powi(n as i32);
                ds += a * n as f64 * x.powi(n as i32 - 1);
            }
        }
        prop_assert!(t.lo <= s && s <= t.hi);
        prop_assert!(d.lo <= ds && ds <= d.hi);
    }
}
