use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Exact enumeration would visit more partitions than the configured limit.
    #[error("exact enumeration of partitions of {n} needs {count} terms, over the limit of {limit}; use the Monte Carlo sampler instead")]
    FeasibilityExceeded { n: usize, count: u128, limit: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite input {0}")]
    NonFinite(f64),

    #[error(
        "{method} evaluation at x = {x} did not converge: refinement levels differ by {gap:e}"
    )]
    ConvergenceFailure {
        method: &'static str,
        x: f64,
        gap: f64,
    },

    #[error("rounded color count d = {d} for n = {n}, x = {x} lies outside [1, n]")]
    DOutOfRange { n: usize, x: f64, d: i64 },

    #[error("tensor space dimension {d}^{n} exceeds the cap of {cap}")]
    SizeGuard { n: usize, d: usize, cap: usize },

    #[error("could not resolve isotypic blocks: {0}")]
    DegeneracyUnresolved(String),
}
