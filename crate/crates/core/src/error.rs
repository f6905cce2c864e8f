use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular: {0}")]
    Singular(String),

    #[error("pole at z = 1")]
    Pole,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error(
        "quadrature did not converge after {levels} levels (best estimate {estimate}, last difference {difference:e})"
    )]
    PrecisionFailure { levels: u32, estimate: String, difference: f64 },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("no rational with denominator <= {0} inside the error window")]
    NoRational(String),

    #[error("unknown id: {0}")]
    UnknownId(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
