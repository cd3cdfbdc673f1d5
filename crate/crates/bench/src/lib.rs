//! Fixtures shared by the benchmarks.

use argqubo::benchgen::{gen_er, GenSpec};
use argqubo::{ArgumentSet, ArgumentationFramework};

pub fn er(n: usize, seed: u64) -> ArgumentationFramework {
    gen_er(&GenSpec::er(n, seed))
}

/// Every fifth argument.
pub fn sparse_target(n: usize) -> ArgumentSet {
    ArgumentSet::from_indices(n, (0..n).step_by(5))
}
