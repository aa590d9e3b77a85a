//! Fractional parts of `f(n)^(1/k)` and their distribution on `[0, 1)`.
//!
//! Roots are taken in integer fixed point: `iroot(x * 2^(kP), k)` brackets
//! `x^(1/k)` between consecutive multiples of `2^-P`, so the fractional part is
//! known to `P` bits with no floating-point step. A sample stores
//! `floor(frac * 2^64)`, which is exact whenever the bracket stays inside
//! `(0, 1)`; `P` starts at 96 and doubles until it does.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::power::iroot_bracket;
use crate::{CoeffTable, Error, Result};

const GUARD_BITS: u64 = 96;
const TWO_64: f64 = 18_446_744_073_709_551_616.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FracSample {
    pub n: u64,
    pub k: u32,
    /// `floor(frac * 2^64)`; the true value lies in `[fixed, fixed + 1) / 2^64`.
    pub fixed: u64,
    /// `f(n)` is a perfect `k`-th power (then `fixed == 0` exactly).
    pub exact: bool,
}

impl FracSample {
    pub fn frac(&self) -> f64 {
        self.fixed as f64 / TWO_64
    }

    /// The fractional part truncated to 18 decimal digits, e.g. `0.414213562373095048`.
    pub fn frac_decimal(&self) -> String {
        let digits = (u128::from(self.fixed) * 1_000_000_000_000_000_000u128) >> 64;
        format!("0.{digits:018}")
    }
}

/// Fractional part of `x^(1/k)` for `x >= 1`, `k >= 2`.
pub fn frac_root(x: &BigUint, k: u32) -> Result<FracSample> {
    frac_root_at(x, k, 0)
}

fn frac_root_at(x: &BigUint, k: u32, n: u64) -> Result<FracSample> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("root exponent k must be >= 2, got {k}")));
    }
    let (r, lo, _) = iroot_bracket(x, k)?;
    if &lo == x {
        return Ok(FracSample { n, k, fixed: 0, exact: true });
    }
    let mut p = GUARD_BITS;
    loop {
        let scaled = x << (k as u64 * p) as usize;
        let (big_r, _, _) = iroot_bracket(&scaled, k)?;
        // frac lies in [f, f + 1) / 2^P
        let f = big_r - (&r << p as usize);
        let full = (BigUint::from(1u32) << p as usize) - 1u32;
        if f.bits() > 0 && f != full {
            let fixed = (f >> (p - 64) as usize).to_u64().expect("fraction below 1");
            return Ok(FracSample { n, k, fixed, exact: false });
        }
        p *= 2;
    }
}

/// Fractional parts for `n = 1..=n_max`.
pub fn frac_samples(table: &CoeffTable, k: u32, n_max: u64) -> Result<Vec<FracSample>> {
    if n_max as usize > table.n_max() {
        return Err(Error::BoundExceedsTable { bound: n_max, len: table.n_max() as u64 });
    }
    (1..=n_max)
        .into_par_iter()
        .map(|n| frac_root_at(&table.values()[n as usize], k, n))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsReport {
    pub n: u64,
    pub k: u32,
    /// `sup_x |F_N(x) - x|`.
    pub d: f64,
    /// Counts on `bins` equal-width bins of `[0, 1)`.
    pub histogram: Vec<u64>,
}

/// Exact KS statistic of a sample against the uniform law on `[0, 1)`.
pub fn ks_statistic(samples: &[f64]) -> f64 {
    let mut u = samples.to_vec();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64;
            ((i + 1.0) / n - x).max(x - i / n)
        })
        .fold(0.0, f64::max)
}

pub fn histogram(samples: &[FracSample], bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    for s in samples {
        counts[((u128::from(s.fixed) * bins as u128) >> 64) as usize] += 1;
    }
    counts
}

pub fn ks_report(table: &CoeffTable, k: u32, n: u64, bins: usize) -> Result<KsReport> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bin count must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be >= 1".into()));
    }
    let samples = frac_samples(table, k, n)?;
    Ok(report_from(&samples, k, bins))
}

fn report_from(samples: &[FracSample], k: u32, bins: usize) -> KsReport {
    let u: Vec<f64> = samples.iter().map(FracSample::frac).collect();
    KsReport { n: samples.len() as u64, k, d: ks_statistic(&u), histogram: histogram(samples, bins) }
}

/// `D_N` for every `N` in `ns` (each `<= table.n_max()`), sharing one sample set.
pub fn ks_series(table: &CoeffTable, k: u32, ns: &[u64]) -> Result<Vec<(u64, f64)>> {
    let top = ns.iter().copied().max().unwrap_or(0);
    let samples = frac_samples(table, k, top)?;
    let u: Vec<f64> = samples.iter().map(FracSample::frac).collect();
    Ok(ns.iter().map(|&n| (n, ks_statistic(&u[..n as usize]))).collect())
}

/// Decades and half-decades `10, 31, 100, 316, ...` up to `n_max`, plus `n_max`.
pub fn decade_grid(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 10u64;
    while decade <= n_max {
        out.push(decade);
        let half = (decade as f64 * 10f64.sqrt()).floor() as u64;
        if half <= n_max {
            out.push(half);
        }
        decade = decade.saturating_mul(10);
    }
    if out.last() != Some(&n_max) && n_max >= 1 {
        out.push(n_max);
    }
    out
}
