pub mod algebraic;
pub mod complex;
pub mod dyadic;
pub mod fast;
pub mod interval;
pub mod mahler;
pub mod poly;
pub mod residue;
pub mod sturm;

pub use algebraic::AlgebraicNumber;
pub use complex::{complex_root_disks, Disk};
pub use dyadic::Dyadic;
pub use fast::F64Interval;
pub use interval::{Interval, DEFAULT_PREC};
pub use mahler::mahler_measure;
pub use poly::{IntPolynomial, RatPoly};
pub use residue::{reduce_mod, RationalVector};
pub use sturm::{isolate_real_roots, isolate_real_roots_in};

/// Enclosure of `P(x)` for every `x` in `X`, evaluated at `prec` bits.
pub fn eval_poly_interval(p: &IntPolynomial, x: &Interval, prec: u32) -> Interval {
    assert!(prec >= 16, "precision below 16 bits");
    p.eval_interval(&x.with_prec(prec))
}
