use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `|f|` (or the requested norm) cannot be certified piecewise polynomial.
    #[error("unsupported degree {degree} on piece [{lo}, {hi})")]
    UnsupportedDegree {
        degree: usize,
        lo: String,
        hi: String,
    },

    #[error("piece [{lo}, {hi}) takes negative values")]
    NegativePiece { lo: String, hi: String },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: u64, max: u64 },

    #[error("expected n >= m, got m = {m}, n = {n}")]
    BadOrder { m: u64, n: u64 },

    #[error("exponents violate 1/r = 1/p + 1/q - 1: p = {p}, q = {q}, r = {r}")]
    InvalidTriple { p: String, q: String, r: String },

    #[error("comparison undecided at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("empty interval [{lo}, {hi})")]
    EmptyInterval { lo: String, hi: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
