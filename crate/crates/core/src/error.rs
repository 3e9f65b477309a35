use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero is infinite")]
    ZeroValuation,

    #[error("{0} is not a prime")]
    NotPrime(String),

    #[error("incomplete factorization of {n}: cofactor {cofactor} left after the work budget")]
    IncompleteFactorization { n: String, cofactor: String },

    #[error("prime search exhausted its budget of {0} candidates")]
    SearchExhausted(u64),

    #[error("unsupported degree {0}; factorization over Q handles degree at most 6")]
    UnsupportedDegree(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular fiber: {0}")]
    Singular(String),

    #[error("point is not on the curve")]
    OffCurve,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("local integral tail at p = {p} did not stabilise at depth {depth}; retry with a larger depth")]
    UnstableTail { p: u64, depth: u32 },

    #[error("inadmissible target {target}: {reason}")]
    Inadmissible { target: String, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
