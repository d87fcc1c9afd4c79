use std::fmt;
use std::str::FromStr;

use bernoulli_core::numeric::IntPolynomial;
use bernoulli_core::transversality::SeriesClass;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

/// An exact rational parsed from decimal notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal(pub BigRational);

impl FromStr for Decimal {
    type Err = String;

    /// Accepts `-12.5`, `1e-3`, `.25` and `3/7`.
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let bad = || format!("not an exact decimal: {s:?}");
        if let Some((n, d)) = t.split_once('/') {
            let n = Decimal::from_str(n)?.0;
            let d = Decimal::from_str(d)?.0;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            return Ok(Decimal(n / d));
        }
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, mant) = match mant.as_bytes().first() {
            Some(b'-') => (true, &mant[1..]),
            Some(b'+') => (false, &mant[1..]),
            _ => (false, mant),
        };
        let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
        let scale = exp - frac.len() as i32;
        let ten = BigInt::from(10);
        let mut r = BigRational::from_integer(digits);
        if scale >= 0 {
            r *= BigRational::from_integer(ten.pow(scale as u32));
        } else {
            r /= BigRational::from_integer(ten.pow(scale.unsigned_abs()));
        }
        Ok(Decimal(if neg { -r } else { r }))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `lo,hi` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Range {
    pub lo: Decimal,
    pub hi: Decimal,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
        let (lo, hi) = (a.parse::<Decimal>()?, b.parse::<Decimal>()?);
        if lo.0 >= hi.0 {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Range { lo, hi })
    }
}

/// Integer coefficients from degree 0 upward, comma separated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub IntPolynomial);

impl FromStr for Poly {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let coeffs = s
            .split(',')
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| format!("bad coefficient {c:?} in {s:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let p = IntPolynomial::new(coeffs);
        if p.is_zero() {
            return Err("the zero polynomial has no roots to study".into());
        }
        Ok(Poly(p))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A point in `(0, 1)`: an exact decimal, or one of `2^-1/2`, `2^-2/3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub enum Point {
    Exact(Decimal),
    SqrtHalf,
    TwoPowMinusTwoThirds,
}

impl From<Point> for String {
    fn from(p: Point) -> String {
        match p {
            Point::Exact(d) => d.to_string(),
            Point::SqrtHalf => "2^-1/2".into(),
            Point::TwoPowMinusTwoThirds => "2^-2/3".into(),
        }
    }
}

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "2^-1/2" | "2^(-1/2)" => Ok(Point::SqrtHalf),
            "2^-2/3" | "2^(-2/3)" => Ok(Point::TwoPowMinusTwoThirds),
            t => Ok(Point::Exact(t.parse()?)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassArg {
    Full,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Pruned,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub struct SeriesClassArg(pub SeriesClass);

impl From<SeriesClassArg> for String {
    fn from(c: SeriesClassArg) -> String {
        c.0.name()
    }
}

impl FromStr for SeriesClassArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SeriesClass::parse(s).map(SeriesClassArg).map_err(|e| e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "bernoulli", version, about = "Certified numerics for Bernoulli convolutions")]
pub struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Skip the result cache
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// A real algebraic λ: a polynomial and, when it has several roots in
/// `(0, 1)`, a window holding exactly one of them.
#[derive(Args, Debug, Clone, Serialize)]
pub struct LambdaArgs {
    /// Coefficients from degree 0, e.g. "-1,1,1" for x²+x−1
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Poly,

    /// Window `lo,hi` isolating the root
    #[arg(long, allow_hyphen_values = true)]
    pub root_in: Option<Range>,

    /// Working precision in bits
    #[arg(long, default_value_t = 128)]
    pub prec: u32,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Mahler measure of a polynomial
    Mahler {
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        #[arg(long, default_value_t = 128)]
        prec: u32,
    },
    /// Isolating intervals for the real roots of a polynomial
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        #[arg(long, allow_hyphen_values = true)]
        root_in: Option<Range>,
        #[arg(long, default_value_t = 128)]
        prec: u32,
    },
    /// Entropy series H_N of the Bernoulli sums
    Entropy {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 24)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Full)]
        class: ClassArg,
        /// Emit (n, h_lo, h_hi) rows as CSV
        #[arg(long)]
        csv: bool,
        /// Report entropies in bits
        #[arg(long)]
        bits: bool,
    },
    /// Dimension verdict from Mahler measure, entropy series and Phi
    Dim {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 24)]
        nmax: usize,
        #[arg(long)]
        bits: bool,
    },
    /// Compare the entropy window with c·min(ln 2, ln M) ≤ h ≤ min(ln 2, ln M)
    Bvcheck {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 24)]
        nmax: usize,
        #[arg(long)]
        bits: bool,
    },
    /// Lower bounds for Phi(a), one or more comma-separated values
    Phi {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        a: Vec<Decimal>,
        /// Emit (a, phi_lo, phi_hi) rows as CSV
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        bits: bool,
    },
    /// Threshold C(h) with Phi(C(h)) ≥ h
    Cofh {
        /// Target entropy in nats
        #[arg(long, allow_hyphen_values = true)]
        h: Decimal,
    },
    /// Certify delta-transversality on [0, x0], or search for the best delta
    Transversal {
        #[arg(long, default_value = "P")]
        series_class: SeriesClassArg,
        /// Right end, an exact decimal or one of 2^-1/2, 2^-2/3
        #[arg(long, allow_hyphen_values = true)]
        x0: Point,
        /// Omit to search the dyadic grid for the largest certified delta
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<Decimal>,
        #[arg(long, default_value_t = 10_000_000)]
        budget_nodes: u64,
    },
    /// Minimum of |P(λ)| over {-1,0,1} polynomials of degree at most n
    Minval {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Full)]
        class: ClassArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Pruned)]
        mode: ModeArg,
        /// Skip polynomials vanishing at λ
        #[arg(long)]
        nonzero: bool,
    },
    /// Check min |P(ξ)| ≥ M^-n (n+1)^(1-d) for n up to nmax
    GarsiaCheck {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
    /// Sample |P(λ)| on the annulus around ξ against (20M)^-n
    Separation {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long)]
        n: usize,
        /// Sample points per side
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Every root of a {-1,0,1} polynomial of degree at most nmax in a window
    Atlas {
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, default_value = "0.5,1", allow_hyphen_values = true)]
        root_in: Range,
        #[arg(long, default_value_t = 128)]
        prec: u32,
        /// Emit (root_lo, root_hi, poly, degree) rows as CSV
        #[arg(long)]
        csv: bool,
    },
    /// Monte-Carlo box-entropy estimate of the dimension
    Boxdim {
        #[command(flatten)]
        lambda: LambdaArgs,
        /// Truncation depth; defaults to the smallest admissible
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Finest scale is 2^-scale
        #[arg(long, default_value_t = 8)]
        scale: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mahler { .. } => "mahler",
            Command::Roots { .. } => "roots",
            Command::Entropy { .. } => "entropy",
            Command::Dim { .. } => "dim",
            Command::Bvcheck { .. } => "bvcheck",
            Command::Phi { .. } => "phi",
            Command::Cofh { .. } => "cofh",
            Command::Transversal { .. } => "transversal",
            Command::Minval { .. } => "minval",
            Command::GarsiaCheck { .. } => "garsia-check",
            Command::Separation { .. } => "separation",
            Command::Atlas { .. } => "atlas",
            Command::Boxdim { .. } => "boxdim",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!("0.1".parse::<Decimal>().unwrap().0, q(1, 10));
        assert_eq!("-1.25e2".parse::<Decimal>().unwrap().0, q(-125, 1));
        assert_eq!(".5".parse::<Decimal>().unwrap().0, q(1, 2));
        assert_eq!("2/3".parse::<Decimal>().unwrap().0, q(2, 3));
        assert_eq!("1e-3".parse::<Decimal>().unwrap().0, q(1, 1000));
        for bad in ["", ".", "1.2.3", "abc", "1/0", "0x10"] {
            assert!(bad.parse::<Decimal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges_and_polys() {
        let r: Range = "0.6,0.7".parse().unwrap();
        assert_eq!((r.lo.0, r.hi.0), (q(3, 5), q(7, 10)));
        assert!("0.7,0.6".parse::<Range>().is_err());
        assert_eq!("-1,1,1".parse::<Poly>().unwrap().0, IntPolynomial::from_i64s(&[-1, 1, 1]));
        assert!("0,0".parse::<Poly>().is_err());
    }
}
