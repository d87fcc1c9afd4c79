use thiserror::Error;

use crate::numeric::Disk;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("{0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("value table stopped after {steps} steps with {entries} entries: {reason}")]
    TableCap { steps: usize, entries: usize, reason: String },

    #[error("root disks not separated at {prec} bits")]
    RootSeparation { prec: u32, best_effort: Vec<Disk> },
}

pub type Result<T> = std::result::Result<T, Error>;
