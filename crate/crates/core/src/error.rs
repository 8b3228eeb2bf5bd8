use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("{0} has no multiplicative inverse")]
    ZeroInverse(u32),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter must be nonzero for {0}")]
    ZeroParameter(&'static str),
    #[error("grid of {0} points exceeds the enumeration budget")]
    TooLarge(u128),
    #[error("closed-form value {0} is not within 1e-6 of an integer")]
    RoundingMismatch(f64),
    #[error("function lives on the {got:?} side, expected {expected:?}")]
    SideMismatch {
        expected: crate::fourier::Side,
        got: crate::fourier::Side,
    },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} is out of range for dimension {dim}")]
    UnknownVariable { index: usize, dim: usize },
    #[error("negative exponent at byte {0}")]
    NegativeExponent(usize),
    #[error("variety is empty")]
    EmptyVariety,
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),
    #[error("invalid exponent: {0}")]
    BadExponent(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
