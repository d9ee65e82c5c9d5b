//! Row-maximizing V-moves, the Minrows bound, the spaghetti boundary and
//! one-shuffle mapping of n-sets onto function graphs.

mod graph;
mod minrows;
mod partition;
mod spaghetti;
mod voptimize;

pub use graph::*;
pub use minrows::{critical_partitions, minrows, rowunique, MinrowsResult};
pub use partition::{for_each_partition, rows_recursion, rows_step, rval, Partition};
pub use spaghetti::{
    failing_rows, n_bf, spaghetti_boundary, SpaghettiBound, CASE_CORRECTIONS, FREE_ROW_LIMITS,
    SPAGHETTI_MAX_N,
};
pub use voptimize::*;
