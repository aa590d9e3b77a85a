//! Exact partition-type counting functions and their distance to perfect
//! powers.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`] expands `prod (1 - x^a)^(-e_a)` into exact coefficient tables;
//! - [`power`] measures distances to `k`-th powers and to powers of a fixed base;
//! - [`scan`] turns those distances into `M_{f,k}(d)`, `L_f(d)` and related
//!   bounded-search quantities;
//! - [`equidist`] computes fractional parts of `f(n)^(1/k)` and KS statistics;
//! - [`model`] implements the random model in which `f(n)` is drawn uniformly
//!   from an interval around its asymptotic `A(n)`.

pub mod dgrid;
pub mod equidist;
mod error;
pub mod model;
pub mod oracle;
pub mod params;
pub mod power;
pub mod real;
pub mod scan;
pub mod series;

pub use num_bigint::BigUint;
pub use num_rational::BigRational;

pub use error::{Error, Result};
pub use params::AsymptoticParams;
pub use power::{PowerDistance, Side, TildeDistance};
pub use scan::ScanRow;
pub use series::{Builtin, CoeffTable, ExponentRule, ProductSpec};

/// Arbitrary-precision nonnegative integer used for every exact value.
pub type Natural = BigUint;
