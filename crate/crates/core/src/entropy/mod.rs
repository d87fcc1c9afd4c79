//! Garsia entropy: the exact law of `Σ_{n<N} ±λⁿ`, its Shannon entropy
//! `H_N`, and bounds for `h_λ = lim H_N / N`.

mod distribution;
mod series;

pub use distribution::{shift_distribution, ValueDistribution, DEFAULT_CAP};
pub use series::{
    entropy, entropy_bits, entropy_series, entropy_series_with_cap, garsia_estimate, garsia_upper_bound, EntropyEntry,
    EntropySeries, Estimate, IndexFilter, Truncation,
};
