use thiserror::Error;

/// Errors raised by the partition, volume and geometry engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("index {index} appears on both sides of the partition")]
    Overlap { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("g_{ell}({r}) did not reach tolerance {requested:e} (estimate {achieved:e})")]
    ToleranceNotAchieved {
        ell: usize,
        r: f64,
        requested: f64,
        achieved: f64,
    },

    #[error("method {method} cannot evaluate v_{k}({m},{n})")]
    MethodMismatch {
        method: &'static str,
        k: usize,
        m: usize,
        n: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate point configuration: {0}")]
    Degenerate(String),

    #[error("enumeration bound exceeded: {what} = {value} > {limit}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
