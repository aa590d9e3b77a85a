use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ppl", version, about = "Partition functions near perfect powers: tables, scans and the random model")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Where coefficient values come from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Builtin function: p, overpartition (pbar), strict (q), selfconj (sc),
    /// nonunitary (r), plane (pl), colored2 (p2), colored:R, parts:a,b,...
    #[arg(long, short = 'f')]
    pub function: Option<String>,

    /// JSON product spec for a custom function.
    #[arg(long, conflicts_with = "function")]
    pub spec_file: Option<PathBuf>,

    /// Precomputed `n,value` CSV (as written by `gen`).
    #[arg(long)]
    pub values_file: Option<PathBuf>,
}

/// Asymptotic parameters for the model and bound formulas.
#[derive(Args, Debug, Clone)]
pub struct ModelSource {
    /// Builtin function with known asymptotic parameters.
    #[arg(long, short = 'f')]
    pub function: Option<String>,

    /// Explicit parameters `a,b,c,beta,eps_const`.
    #[arg(long, conflicts_with = "function")]
    pub params: Option<String>,

    /// Override the second-order constant (eps_n = eps_const / n^beta).
    #[arg(long)]
    pub eps_const: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquidistReport {
    /// `n,frac` for every sample.
    Samples,
    /// `bin_lo,bin_hi,count`.
    Histogram,
    /// `N,k,D` on the decade/half-decade grid.
    Ks,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportArg {
    Unclamped,
    Clamped,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient table `n,value` for n = 0..=N.
    Gen {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n_max: usize,
    },
    /// Distance from f(n) to the nearest k-th power.
    Delta {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: u32,
        /// Single index.
        #[arg(long, conflicts_with = "n_range", required_unless_present = "n_range")]
        n: Option<u64>,
        /// Index range `LO:HI`.
        #[arg(long)]
        n_range: Option<String>,
        /// Elide values with more digits than this.
        #[arg(long)]
        max_digits: Option<usize>,
    },
    /// Distance from f(n) to the nearest power of a fixed base.
    DeltaTilde {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        base: u64,
        #[arg(long, conflicts_with = "n_range", required_unless_present = "n_range")]
        n: Option<u64>,
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        max_digits: Option<usize>,
    },
    /// Largest n <= B with f(n) within d of a k-th power.
    ScanM {
        #[command(flatten)]
        source: Source,
        /// Exponents: `2`, `2,3,5` or `2:6`.
        #[arg(long)]
        k: String,
        /// d grid: `10^5`, `1,2,3`, `pow2:0:450`, `pow10:0:200`.
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
    },
    /// Largest n <= B with f(n) within d of a power of the base.
    ScanMtilde {
        #[command(flatten)]
        source: Source,
        /// Bases: `2`, `2,3` or `2:10`.
        #[arg(long)]
        base: String,
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 50_000)]
        bound: u64,
        /// Count only near misses: exact hits f(n) = a^k do not qualify.
        #[arg(long)]
        exclude_exact: bool,
    },
    /// Scan-based estimate of N_{f,d}.
    ScanNd {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 40)]
        k_max: u32,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Closed-form bounds on M_k(d) and N_d.
    Bounds {
        #[command(flatten)]
        model: ModelSource,
        #[arg(long)]
        k: String,
        #[arg(long)]
        d: String,
        /// Constant A in the second lower bound on N_d.
        #[arg(long)]
        a_const: Option<f64>,
        /// Also evaluate the half gap (k/2) A(n)^((k-1)/k) at this n.
        #[arg(long)]
        n: Option<f64>,
    },
    /// Fractional parts of f(n)^(1/k) and their KS statistic.
    Equidist {
        #[command(flatten)]
        source: Source,
        /// Exponents (several allowed only for `--report ks`).
        #[arg(long)]
        k: String,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = EquidistReport::Ks)]
        report: EquidistReport,
    },
    /// Expected number of perfect powers in the random model.
    ModelExpect {
        /// Builtins, comma separated.
        #[arg(long, short = 'f', default_value = "p,q,sc,r,pl")]
        function: String,
        #[arg(long, conflicts_with = "function")]
        params: Option<String>,
        #[arg(long)]
        eps_const: Option<f64>,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = SupportArg::Unclamped)]
        support: SupportArg,
    },
    /// Exact P(Delta <= d) on S_n against the analytic bounds.
    ModelProb {
        #[command(flatten)]
        model: ModelSource,
        #[arg(long)]
        n_range: String,
        /// Power exponent; omit with `--any`.
        #[arg(long, required_unless_present = "any", conflicts_with = "any")]
        k: Option<u32>,
        /// Distance to any perfect power.
        #[arg(long)]
        any: bool,
        #[arg(long, default_value = "0")]
        d: String,
    },
    /// Seeded Monte Carlo trials of the random model.
    ModelSimulate {
        #[command(flatten)]
        model: ModelSource,
        /// Use the constant interval `A = CENTER, eps = EPS` instead.
        #[arg(long, conflicts_with_all = ["function", "params"])]
        synthetic: Option<String>,
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "0")]
        d: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
