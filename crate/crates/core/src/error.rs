use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid product spec: {0}")]
    InvalidSpec(String),

    #[error("recurrence sum at n = {n} is not divisible by n (corrupted spec or arithmetic bug)")]
    NonExactDivision { n: usize },

    #[error("negative coefficient at n = {n}; spec `{name}` is not a counting function")]
    NegativeCoefficient { name: String, n: usize },

    #[error("brute-force enumeration limited to n <= {max}, got {n}")]
    OracleTooLarge { n: u64, max: u64 },

    #[error("root exponent must be at least 1")]
    ZeroExponent,

    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("scan bound {bound} exceeds table length {len}")]
    BoundExceedsTable { bound: u64, len: u64 },

    #[error("table up to n = {n_max} is too short to witness L(d) for d = {d}")]
    TableExhausted { d: String, n_max: u64 },

    #[error("table is not nondecreasing from index 1 (first drop at n = {n})")]
    NonMonotoneTable { n: u64 },

    #[error("no index n >= 1 satisfies f(n) <= d + 1 for d = {d}")]
    NoQualifyingIndex { d: String },

    #[error("invalid asymptotic parameters: {0}")]
    InvalidParams(String),

    #[error("precision escalation for n = {n} exceeded the cap of {cap} bits")]
    PrecisionCapExceeded { n: u64, cap: u64 },

    #[error("model interval S_{n} contains no natural number")]
    EmptyInterval { n: u64 },

    #[error("{candidates} candidate powers in the window exceed the enumeration cap")]
    DenseWindow { candidates: String },

    #[error("tail bound could not be brought below {tol} before n = {cap}")]
    ToleranceUnreachable { tol: f64, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
