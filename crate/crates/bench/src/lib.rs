//! Shared fixtures for the benchmarks.

use ppl_core::{Builtin, CoeffTable};

/// `p(0..=n_max)`.
pub fn p_table(n_max: usize) -> CoeffTable {
    CoeffTable::build_builtin(&Builtin::P, n_max).expect("p table")
}
