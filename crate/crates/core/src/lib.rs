//! Certified numerics for Bernoulli convolutions.
//!
//! The crate is organised bottom-up:
//!
//! * [`numeric`]: exact integer polynomials, dyadic interval arithmetic,
//!   real and complex root enclosures, Mahler measure, residues modulo a
//!   polynomial.
//! * [`entropy`]: the exact distribution of `Σ ±λⁿ` and its entropy series.
//! * [`phi`]: entropy gaps of two-point Gaussian mixtures and the threshold
//!   `C(h)`.
//! * [`transversality`]: branch-and-bound certificates for power series with
//!   coefficients in `{-1, 0, 1}`.
//! * [`search`]: minima of `|P(λ)|`, the Garsia bound, separation checks and
//!   the root atlas.
//! * [`pipeline`]: dimension verdicts and sampling cross-checks.

pub mod entropy;
pub mod error;
pub mod numeric;
pub mod phi;
pub mod pipeline;
pub mod search;
pub mod transversality;

pub use error::{Error, Result};
