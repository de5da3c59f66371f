use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("exponent {exponent} is not below modulus {modulus}")]
    ExponentOutOfRange { exponent: u32, modulus: u32 },

    #[error("polynomial matrix has no modulus")]
    MissingModulus,

    #[error("bi-infinite Toeplitz permutation cannot be materialized at finite size")]
    InfinitePermutation,

    #[error("invalid cover specification: {0}")]
    InvalidCover(String),

    #[error("{ell} does not divide {of}")]
    NotADivisor { ell: usize, of: usize },

    #[error("row {0} of the polynomial matrix is empty")]
    EmptyRow(usize),

    #[error("code is not systematically encodable: {0}")]
    NotEncodable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cycle length {max_len} is not below twice the girth ({girth})")]
    BeyondTwiceGirth { max_len: usize, girth: usize },

    #[error("row weight {weight} exceeds the enumeration bound {bound}")]
    RowWeightTooLarge { weight: usize, bound: usize },

    #[error("target BER {0} is not bracketed by the simulated curve")]
    NotBracketed(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
