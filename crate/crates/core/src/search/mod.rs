//! Small values of `{−1, 0, 1}` polynomials: exact minima by branch and
//! bound, Garsia's lower bound, the annulus separation check and the atlas
//! of low-degree roots.

mod atlas;
mod garsia;
mod minval;
mod separation;

pub use atlas::{root_atlas, AtlasRoot, RootAtlas};
pub use garsia::{garsia_bound, proof_identity, verify_garsia_bound, BoundVerdict, GarsiaReport, GarsiaRow, IdentityCheck};
pub use minval::{min_abs_value, min_abs_value_with, min_nonzero_abs_value, CoeffClass, Mode, Scalar, SearchResult};
pub use separation::{separation_check, separation_threshold_n, SeparationReport, SeparationSample, SeparationVerdict};
