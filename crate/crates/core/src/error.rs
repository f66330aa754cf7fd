use thiserror::Error;

/// Errors raised by the number-theoretic and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arguments are not coprime: gcd({a}, {b}) != 1")]
    NotCoprime { a: i64, b: i64 },

    #[error("expected an odd positive integer, got {0}")]
    EvenArgument(i64),

    #[error("modulus {0} must be odd")]
    EvenModulus(i64),

    #[error("modulus {0} must be even")]
    OddModulus(i64),

    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),

    #[error("matrix must have c > 0, got c = {0}")]
    NonPositiveC(i64),

    #[error("matrix [[{a}, {b}], [{c}, {d}]] does not have determinant 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64 },

    #[error("closed eta multiplier is undefined for c = {c}, d = {d}")]
    UndefinedCase { c: i64, d: i64 },

    #[error("index {index} outside [1, {max}]")]
    IndexOutOfRange { index: i64, max: i64 },

    #[error("N must be at least 2, got {0}")]
    InvalidLevel(i64),

    #[error("N = {0} is excluded: sqrt(N/6) is an integer (pole on the integration boundary)")]
    InvalidN(i64),

    #[error("n = 0 is not covered by the convergent series")]
    ZeroN,

    #[error("Bessel argument {0} exceeds the overflow guard (700)")]
    Overflow(f64),

    #[error("quadrature order {0} outside [2, 128]")]
    OrderOutOfRange(usize),

    #[error("pole {pole} lies outside ({a}, {b})")]
    PoleOutsideInterval { a: f64, b: f64, pole: f64 },

    #[error("pole {0} lies on the integration boundary")]
    PoleOnBoundary(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
