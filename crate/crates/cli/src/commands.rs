use bernoulli_core::entropy::{entropy_series_with_cap, garsia_upper_bound, IndexFilter};
use bernoulli_core::numeric::interval::ln2;
use bernoulli_core::numeric::{isolate_real_roots, mahler_measure, AlgebraicNumber, Dyadic, IntPolynomial, Interval};
use bernoulli_core::phi::{capital_c, phi, PhiConfig};
use bernoulli_core::pipeline::{
    bv_inequality_check, dimension_report, empirical_box_entropy, min_truncation, DimensionVerdict, PipelineConfig,
    BV_CONSTANT, DEFAULT_TABLE_CAP,
};
use bernoulli_core::search::{
    min_abs_value, min_nonzero_abs_value, root_atlas, separation_check, verify_garsia_bound, BoundVerdict, CoeffClass,
    Mode, SeparationVerdict,
};
use bernoulli_core::transversality::{certify, delta_search, two_pow_minus_two_thirds_up, Budget, Status};
use bernoulli_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::args::{ClassArg, Command, Decimal, LambdaArgs, ModeArg, Point, Range};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Largest `δ` exponent tried by the transversality search, and the
/// bisection steps after the first success.
const DELTA_MAX_EXP: i32 = 10;
const DELTA_REFINE: u32 = 8;
const BV_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::ZeroPolynomial | Error::Domain(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

pub enum Body {
    Json(Value),
    Csv(String),
}

pub struct Report {
    pub code: i32,
    pub body: Body,
}

impl Report {
    fn json(code: i32, command: &str, status: &str, result: Value) -> Report {
        Report { code, body: Body::Json(json!({ "command": command, "status": status, "result": result })) }
    }
}

fn rational(d: &Decimal) -> &BigRational {
    &d.0
}

fn f64_down(r: &BigRational) -> f64 {
    Dyadic::from_rational_floor(r, 64).to_f64_down()
}

fn f64_up(r: &BigRational) -> f64 {
    Dyadic::from_rational_ceil(r, 64).to_f64_up()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn exact(iv: &Interval) -> Value {
    json!([format!("{:?}", iv.lo()), format!("{:?}", iv.hi())])
}

/// The λ named by `--poly` and `--root-in`, or the only root in `(0, 1)`.
fn resolve(l: &LambdaArgs) -> Result<AlgebraicNumber, Failure> {
    let p = &l.poly.0;
    if let Some(r) = &l.root_in {
        return Ok(AlgebraicNumber::root_in(p, rational(&r.lo), rational(&r.hi))?);
    }
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    let roots: Vec<_> = AlgebraicNumber::roots_in_open(p, &Dyadic::zero(), &Dyadic::one())?
        .into_iter()
        .filter(|r| r.inside_open(&zero, &one))
        .collect();
    match <[_; 1]>::try_from(roots) {
        Ok([r]) => Ok(r),
        Err(v) => Err(Failure::Usage(format!(
            "polynomial {} has {} roots in (0, 1); pick one with --root-in lo,hi",
            p,
            v.len()
        ))),
    }
}

fn class_of(c: ClassArg) -> CoeffClass {
    match c {
        ClassArg::Full => CoeffClass::Full,
        ClassArg::Q => CoeffClass::QTrimmed,
    }
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Divides entropy values under `keys` by `ln 2`, widening outward.
fn to_bits(v: &mut Value, keys: &[&str]) {
    fn convert(v: &mut Value) {
        match v {
            Value::Number(n) => {
                if let Some(x) = n.as_f64() {
                    *v = json!(x / std::f64::consts::LN_2);
                }
            }
            Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
                let lo = a[0].as_f64().unwrap_or(0.0) / std::f64::consts::LN_2;
                let hi = a[1].as_f64().unwrap_or(0.0) / std::f64::consts::LN_2;
                *v = json!([lo.next_down(), hi.next_up()]);
            }
            Value::Array(a) => a.iter_mut().for_each(convert),
            _ => {}
        }
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m.iter_mut() {
                if keys.contains(&k.as_str()) {
                    convert(x);
                } else {
                    to_bits(x, keys);
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(|x| to_bits(x, keys)),
        _ => {}
    }
}

fn with_unit(mut v: Value, bits: bool, keys: &[&str]) -> Value {
    if bits {
        to_bits(&mut v, keys);
    }
    if let Value::Object(m) = &mut v {
        m.insert("entropy_unit".into(), json!(if bits { "bits" } else { "nats" }));
    }
    v
}

pub fn run(cmd: &Command) -> Result<Report, Failure> {
    let name = cmd.name();
    match cmd {
        Command::Mahler { poly, prec } => {
            let m = mahler_measure(&poly.0, *prec)?;
            let result = json!({ "poly": poly, "prec": prec, "mahler": m, "mahler_exact": exact(&m), "width": m.width_f64() });
            Ok(Report::json(EXIT_OK, name, "OK", result))
        }

        Command::Roots { poly, root_in, prec } => {
            let roots = real_roots(&poly.0, root_in.as_ref(), *prec)?;
            let list: Vec<Value> = roots.iter().map(|iv| json!({ "enclosure": iv, "exact": exact(iv) })).collect();
            Ok(Report::json(EXIT_OK, name, "OK", json!({ "poly": poly, "prec": prec, "count": list.len(), "roots": list })))
        }

        Command::Entropy { lambda, nmax, class, csv, bits } => {
            let xi = resolve(lambda)?;
            let filter = match class {
                ClassArg::Full => IndexFilter::All,
                ClassArg::Q => IndexFilter::Trimmed,
            };
            let series = entropy_series_with_cap(&xi, *nmax, filter, DEFAULT_TABLE_CAP)?;
            let (code, status) = if series.is_truncated() { (EXIT_INCONCLUSIVE, "TRUNCATED") } else { (EXIT_OK, "OK") };
            let pick = |e: &bernoulli_core::entropy::EntropyEntry| if *bits { e.h_bits.clone() } else { e.h.clone() };
            if *csv {
                let rows = series
                    .entries
                    .iter()
                    .map(|e| {
                        let h = pick(e);
                        vec![e.n.to_string(), h.lo_f64().to_string(), h.hi_f64().to_string()]
                    })
                    .collect();
                return Ok(Report { code, body: Body::Csv(csv_text(&["n", "h_lo", "h_hi"], rows)) });
            }
            let entries: Vec<Value> = series
                .entries
                .iter()
                .map(|e| {
                    let h = pick(e);
                    json!({ "n": e.n, "ambient": e.ambient, "h": h, "ratio": h.div_int(e.n as i64), "table_size": e.table_size })
                })
                .collect();
            let h_upper = garsia_upper_bound(&series).ok().map(|h| if *bits { h.div(&ln2(128)).expect("ln 2 > 0") } else { h });
            let result = json!({
                "lambda": xi,
                "filter": series.filter,
                "entries": entries,
                "h_upper": h_upper,
                "truncated": series.truncated,
                "entropy_unit": if *bits { "bits" } else { "nats" },
            });
            Ok(Report::json(code, name, status, result))
        }

        Command::Dim { lambda, nmax, bits } => {
            let xi = resolve(lambda)?;
            let cfg = PipelineConfig { n_max: *nmax, prec: lambda.prec, ..Default::default() };
            let r = dimension_report(&xi, &cfg)?;
            let (code, status) = match r.verdict {
                DimensionVerdict::DimOneCertified => (EXIT_OK, "DIM_ONE_CERTIFIED"),
                DimensionVerdict::DimLtOneCertified => (EXIT_OK, "DIM_LT_ONE_CERTIFIED"),
                DimensionVerdict::Unresolved => (EXIT_INCONCLUSIVE, "UNRESOLVED"),
            };
            let v = with_unit(to_value(&r), *bits, &["h", "ratio", "h_upper", "h_lower", "phi_lower", "phi_estimate"]);
            Ok(Report::json(code, name, status, v))
        }

        Command::Bvcheck { lambda, nmax, bits } => {
            let xi = resolve(lambda)?;
            let cfg = PipelineConfig { n_max: *nmax, prec: lambda.prec, ..Default::default() };
            let r = bv_inequality_check(&xi, &cfg, BV_CONSTANT, BV_TOLERANCE)?;
            let (code, status) = if r.consistent { (EXIT_OK, "CONSISTENT") } else { (EXIT_FAIL, "INCONSISTENT") };
            let v = with_unit(to_value(&r), *bits, &["lhs", "rhs_upper", "h_window"]);
            Ok(Report::json(code, name, status, v))
        }

        Command::Phi { a, csv, bits } => {
            let cfg = PhiConfig::default();
            let evals = a
                .iter()
                .map(|x| {
                    let v = rational(x);
                    if v < &BigRational::from_integer(1.into()) {
                        return Err(Failure::Usage(format!("Phi needs a ≥ 1, got {x}")));
                    }
                    Ok(phi(f64_down(v), &cfg)?)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let converged = evals.iter().all(|e| e.converged);
            let code = if converged { EXIT_OK } else { EXIT_INCONCLUSIVE };
            let scale = if *bits { std::f64::consts::LN_2 } else { 1.0 };
            if *csv {
                let rows = evals
                    .iter()
                    .map(|e| {
                        let (lo, hi) = (e.phi_lower.lo_f64() / scale, e.phi_lower.hi_f64() / scale);
                        let (lo, hi) = if *bits { (lo.next_down().max(0.0), hi.next_up()) } else { (lo, hi) };
                        vec![e.a.to_string(), lo.to_string(), hi.to_string()]
                    })
                    .collect();
                return Ok(Report { code, body: Body::Csv(csv_text(&["a", "phi_lo", "phi_hi"], rows)) });
            }
            let v = with_unit(json!({ "evaluations": evals }), *bits, &["phi_lower", "phi_estimate"]);
            Ok(Report::json(code, name, if converged { "OK" } else { "NOT_CONVERGED" }, v))
        }

        Command::Cofh { h } => {
            let r = capital_c(f64_up(rational(h)), &PhiConfig::default())?;
            let (code, status) = if r.certified { (EXIT_OK, "CERTIFIED") } else { (EXIT_INCONCLUSIVE, "INCONCLUSIVE") };
            Ok(Report::json(code, name, status, to_value(&r)))
        }

        Command::Transversal { series_class, x0, delta, budget_nodes } => {
            let x0 = match x0 {
                Point::Exact(d) => f64_up(rational(d)),
                Point::SqrtHalf => std::f64::consts::FRAC_1_SQRT_2.next_up(),
                Point::TwoPowMinusTwoThirds => two_pow_minus_two_thirds_up(),
            };
            let budget = Budget { max_nodes: *budget_nodes };
            match delta {
                Some(d) => {
                    let out = certify(series_class.0, x0, f64_down(rational(d)), &budget)?;
                    let (code, status) = match out.status {
                        Status::Certified => (EXIT_OK, "CERTIFIED"),
                        Status::Counterexample => (EXIT_FAIL, "COUNTEREXAMPLE"),
                        Status::Inconclusive => (EXIT_INCONCLUSIVE, "INCONCLUSIVE"),
                    };
                    Ok(Report::json(code, name, status, to_value(&out)))
                }
                None => {
                    let s = delta_search(series_class.0, x0, DELTA_MAX_EXP, DELTA_REFINE, &budget)?;
                    let (code, status) = match &s.best {
                        Some(_) => (EXIT_OK, "CERTIFIED"),
                        None => (EXIT_INCONCLUSIVE, "INCONCLUSIVE"),
                    };
                    Ok(Report::json(code, name, status, to_value(&s)))
                }
            }
        }

        Command::Minval { lambda, n, class, mode, nonzero } => {
            let xi = resolve(lambda)?;
            let mode = match mode {
                ModeArg::Pruned => Mode::Pruned,
                ModeArg::Exhaustive => Mode::Exhaustive,
            };
            let r = if *nonzero {
                min_nonzero_abs_value(&xi, *n, class_of(*class), mode)?
            } else {
                min_abs_value(&xi.enclosure(lambda.prec), *n, class_of(*class), mode)?
            };
            Ok(Report::json(EXIT_OK, name, "OK", json!({ "lambda": xi, "search": r })))
        }

        Command::GarsiaCheck { lambda, nmax } => {
            let xi = resolve(lambda)?;
            let r = verify_garsia_bound(&xi, *nmax)?;
            let (code, status) = match r.verdict {
                BoundVerdict::Holds => (EXIT_OK, "PASS"),
                BoundVerdict::Violated => (EXIT_FAIL, "FAIL"),
                BoundVerdict::Undecided => (EXIT_INCONCLUSIVE, "INCONCLUSIVE"),
            };
            Ok(Report::json(code, name, status, to_value(&r)))
        }

        Command::Separation { lambda, n, samples } => {
            let xi = resolve(lambda)?;
            let r = separation_check(&xi, *n, *samples)?;
            let (code, status) = match r.verdict {
                SeparationVerdict::Pass => (EXIT_OK, "PASS"),
                SeparationVerdict::Fail => (EXIT_FAIL, "FAIL"),
                SeparationVerdict::Inconclusive => (EXIT_INCONCLUSIVE, "INCONCLUSIVE"),
            };
            Ok(Report::json(code, name, status, to_value(&r)))
        }

        Command::Atlas { nmax, root_in, prec, csv } => {
            let a = root_atlas(*nmax, rational(&root_in.lo), rational(&root_in.hi), *prec)?;
            if *csv {
                let rows = a
                    .roots
                    .iter()
                    .map(|r| {
                        vec![
                            format!("{:?}", r.enclosure.lo().to_f64_down()),
                            format!("{:?}", r.enclosure.hi().to_f64_up()),
                            r.poly.to_string(),
                            r.poly.degree().to_string(),
                        ]
                    })
                    .collect();
                return Ok(Report { code: EXIT_OK, body: Body::Csv(csv_text(&["root_lo", "root_hi", "poly", "degree"], rows)) });
            }
            Ok(Report::json(EXIT_OK, name, "OK", to_value(&a)))
        }

        Command::Boxdim { lambda, n, samples, scale, seed } => {
            let xi = resolve(lambda)?;
            let lam = xi.enclosure(64);
            let n = n.unwrap_or_else(|| min_truncation(lam.hi_f64(), *scale));
            let r = empirical_box_entropy(&lam, n, *samples, *scale, *seed)?;
            Ok(Report::json(EXIT_OK, name, "UNCERTIFIED", to_value(&r)))
        }
    }
}

fn real_roots(p: &IntPolynomial, window: Option<&Range>, prec: u32) -> Result<Vec<Interval>, Failure> {
    let width = BigRational::new(BigInt::from(1), BigInt::from(2).pow(prec));
    match window {
        None => Ok(isolate_real_roots(p, &width)?),
        Some(r) => {
            let (lo, hi) = (rational(&r.lo), rational(&r.hi));
            let (dlo, dhi) = (Dyadic::from_rational_floor(lo, 64), Dyadic::from_rational_ceil(hi, 64));
            Ok(AlgebraicNumber::roots_in_open(p, &dlo, &dhi)?
                .into_iter()
                .filter(|x| x.inside_open(lo, hi))
                .map(|x| x.refined(prec).isolator())
                .collect())
        }
    }
}
