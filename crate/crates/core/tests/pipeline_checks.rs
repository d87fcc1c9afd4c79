use bernoulli_core::numeric::{AlgebraicNumber, Dyadic, IntPolynomial, Interval};
use bernoulli_core::phi::{phi, PhiConfig};
use bernoulli_core::pipeline::{
    bv_inequality_check, decide, dim_upper, dimension_report, empirical_box_entropy, min_truncation, DimensionVerdict,
    PipelineConfig, BV_CONSTANT, QUADRATURE_CAVEAT,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn golden() -> AlgebraicNumber {
    AlgebraicNumber::root_in(&IntPolynomial::from_i64s(&[-1, 1, 1]), &q(1, 2), &q(1, 1)).unwrap()
}

fn cfg(n_max: usize) -> PipelineConfig {
    PipelineConfig { n_max, ..Default::default() }
}

const LN2: f64 = std::f64::consts::LN_2;

#[test]
fn half_has_full_dimension_window() {
    let r = dimension_report(&AlgebraicNumber::from_rational(&q(1, 2)), &cfg(16)).unwrap();
    assert!(r.h_upper.lo_f64() <= LN2 && LN2 <= r.h_upper.hi_f64());
    assert!(r.h_lower.hi_f64() <= LN2);
    assert_eq!(r.dim_upper.lo(), &Dyadic::one());
    assert_eq!(r.dim_upper.hi(), &Dyadic::one());
    assert_ne!(r.verdict, DimensionVerdict::DimLtOneCertified);
    assert_eq!(r.verdict, r.rederived_verdict());
    for p in &r.hn_series {
        assert!(p.normalized.lo_f64() <= 1.0 && 1.0 <= p.normalized.hi_f64());
    }
}

#[test]
fn nine_tenths_verdict_tracks_phi_of_ten() {
    let r = dimension_report(&AlgebraicNumber::from_rational(&q(9, 10)), &cfg(14)).unwrap();
    let phi10 = phi(10.0, &PhiConfig::default()).unwrap().phi_lower.lo_f64();
    let threshold = (10.0f64 / 9.0).ln();
    assert!(r.mahler.lo_f64() <= 10.0 && 10.0 <= r.mahler.hi_f64());
    assert_eq!(r.verdict == DimensionVerdict::DimOneCertified, phi10 > threshold * (1.0 + 1e-12));
    assert_eq!(r.verdict, DimensionVerdict::DimOneCertified);
    assert!(r.h_lower.lo_f64() <= phi10);
}

#[test]
fn golden_series_decreases_toward_the_estimate() {
    let r = dimension_report(&golden(), &cfg(28)).unwrap();
    assert_eq!(r.hn_series.len(), 28);
    assert!(r.flags.is_empty(), "{:?}", r.flags);
    let norm: Vec<f64> = r.hn_series.iter().map(|p| p.normalized.mid_f64()).collect();
    // H_1 = H_2 / 2 = ln 2 since ±1 ± λ are four distinct values
    assert!((norm[0] - norm[1]).abs() < 1e-12);
    for w in norm[1..].windows(2) {
        assert!(w[1] < w[0], "{w:?}");
    }
    let est = r.dim_estimate.value;
    assert!((0.98..1.0).contains(&est), "{est}");
    assert!((est - 0.9957).abs() < 5e-4);
    assert_eq!(r.dim_estimate.label, "UNCERTIFIED");
    assert_ne!(r.verdict, DimensionVerdict::DimOneCertified);
}

#[test]
fn report_json_has_the_documented_keys() {
    let r = dimension_report(&golden(), &cfg(8)).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for k in [
        "lambda_poly",
        "isolator",
        "mahler",
        "hn_series",
        "h_upper",
        "h_lower",
        "log_lambda_inv",
        "dim_upper",
        "dim_estimate",
        "verdict",
        "flags",
    ] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["lambda_poly"], "-1,1,1");
    assert_eq!(v["caveat"], QUADRATURE_CAVEAT);
    assert_eq!(v["verdict"], "UNRESOLVED");
}

#[test]
fn truncation_is_flagged_not_hidden() {
    let c = PipelineConfig { n_max: 20, table_cap: 1000, ..Default::default() };
    let r = dimension_report(&AlgebraicNumber::from_rational(&q(3, 5)), &c).unwrap();
    assert!(r.flags.iter().any(|f| f.starts_with("TRUNCATED_SERIES")));
    assert!(r.hn_series.len() < 20);
}

#[test]
fn windows_never_cross() {
    let plastic = AlgebraicNumber::root_in(&IntPolynomial::from_i64s(&[-1, 0, 1, 1]), &q(1, 2), &q(1, 1)).unwrap();
    for lam in [AlgebraicNumber::from_rational(&q(1, 2)), AlgebraicNumber::from_rational(&q(2, 3)), golden(), plastic] {
        let r = dimension_report(&lam, &cfg(12)).unwrap();
        assert!(r.h_lower.lo() <= r.h_upper.hi());
        assert!(r.dim_upper.hi() <= &Dyadic::one());
        let mut running = f64::INFINITY;
        for p in &r.hn_series {
            let next = running.min(p.ratio.hi_f64());
            assert!(next <= running);
            running = next;
        }
        assert!(r.h_upper.hi_f64() <= running);
    }
}

#[test]
fn rejects_lambda_outside_unit_interval() {
    assert!(dimension_report(&AlgebraicNumber::from_rational(&q(3, 2)), &cfg(4)).is_err());
    assert!(dimension_report(&AlgebraicNumber::from_rational(&q(-1, 2)), &cfg(4)).is_err());
}

#[test]
fn bv_sandwich() {
    let half = bv_inequality_check(&AlgebraicNumber::from_rational(&q(1, 2)), &cfg(12), BV_CONSTANT, 1e-9).unwrap();
    assert!(half.rhs_upper.lo_f64() <= LN2 && LN2 <= half.rhs_upper.hi_f64());
    assert!(half.upper_within_tolerance);
    assert!(half.consistent);

    let g = bv_inequality_check(&golden(), &cfg(20), BV_CONSTANT, 1e-9).unwrap();
    let ln_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!(g.rhs_upper.lo_f64() <= ln_phi && ln_phi <= g.rhs_upper.hi_f64());
    assert!(!g.upper_violated);
    assert!(g.windows_non_crossing && g.lower_claim_consistent && g.consistent);
    // the Fekete bound is still above ln φ at this depth
    assert!(!g.upper_within_tolerance);

    let nt = bv_inequality_check(&AlgebraicNumber::from_rational(&q(9, 10)), &cfg(12), BV_CONSTANT, 1e-9).unwrap();
    let (lo, hi) = &nt.h_window;
    assert!(lo.lo_f64() >= 0.0 && hi.hi_f64() <= LN2 + 1e-12);
    assert!(nt.rhs_upper.hi_f64() <= LN2 + 1e-12);
}

#[test]
fn box_entropy_half_is_one() {
    let lam = Interval::from_rational(&q(1, 2), 64);
    let n = min_truncation(0.5, 8);
    let b = empirical_box_entropy(&lam, n, 100_000, 8, 11).unwrap();
    assert!((b.estimate.value - 1.0).abs() < 0.02, "{:?}", b.estimate);
    assert!(b.estimate.spread > 0.0 && b.estimate.spread < 0.02);
    assert!(b.truncation_error <= (-8f64).exp2() / 8.0);
}

#[test]
fn box_entropy_golden_sits_below_one() {
    let lam = golden().enclosure(64);
    let n = min_truncation(lam.hi_f64(), 8);
    let b = empirical_box_entropy(&lam, n, 100_000, 8, 5).unwrap();
    assert!(b.estimate.value < 1.0);
    assert!((b.estimate.value - 0.9957).abs() < 0.01, "{:?}", b.estimate);
}

#[test]
fn box_entropy_is_seeded_and_guarded() {
    let lam = Interval::from_rational(&q(3, 5), 64);
    let a = empirical_box_entropy(&lam, 30, 10_000, 6, 3).unwrap();
    let b = empirical_box_entropy(&lam, 30, 10_000, 6, 3).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let need = min_truncation(0.6, 10);
    // 0.6^N / 0.4 ≤ 2^-10 / 8 first holds at N = 20
    assert_eq!(need, 20);
    let err = empirical_box_entropy(&lam, need - 1, 10_000, 10, 3).unwrap_err().to_string();
    assert!(err.contains(&format!("N >= {need}")), "{err}");
    assert!(empirical_box_entropy(&lam, 30, 9_999, 6, 3).is_err());
}

fn window(lo: f64, w: f64) -> Interval {
    Interval::from_f64_bounds(lo, lo + w)
}

proptest! {
    #[test]
    fn verdict_follows_the_windows(
        hl in 0.0f64..0.7, hlw in 0.0f64..0.01,
        hu in 0.0f64..0.7, huw in 0.0f64..0.01,
        l in 0.01f64..0.7, lw in 0.0f64..0.01,
    ) {
        let (h_lower, h_upper, ell) = (window(hl, hlw), window(hu, huw), window(l, lw));
        let v = decide(&h_lower, &h_upper, &ell);
        match v {
            DimensionVerdict::DimOneCertified => prop_assert!(hl >= l + lw),
            DimensionVerdict::DimLtOneCertified => prop_assert!(hu + huw < l && hl < l + lw),
            DimensionVerdict::Unresolved => prop_assert!(hl < l + lw && hu + huw >= l),
        }
        let d = dim_upper(&h_upper, &ell);
        prop_assert!(d.hi_f64() <= 1.0);
        prop_assert_eq!(d.lo_f64() == 1.0 && d.hi_f64() == 1.0, hu >= l + lw);
    }

    #[test]
    fn mock_phi_window_drives_dim_one(phi_lo in 0.0f64..0.3) {
        let ell = Interval::from_f64_bounds(0.10536051565782628, 0.10536051565782631);
        let v = decide(&Interval::from_f64_bounds(phi_lo, phi_lo), &Interval::from_f64_bounds(LN2, LN2), &ell);
        prop_assert_eq!(v == DimensionVerdict::DimOneCertified, phi_lo >= 0.10536051565782631);
    }
}
