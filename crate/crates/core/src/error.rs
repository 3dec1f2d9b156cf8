use thiserror::Error;

use crate::freealg::{Field, NcPoly};

/// Errors raised by the algebra, factorization and text layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("alphabet mismatch: [{0}] vs [{1}]")]
    AlphabetMismatch(String, String),
    #[error("arity mismatch: expected {expected} images, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree bound must be at least {min}, got {got}")]
    DegreeBoundInvalid { min: usize, got: usize },
    #[error("alphabet has no generator `z`")]
    AlphabetMissingZ,
    #[error("alphabet must contain generators `x`, `y` and `z`")]
    AlphabetMissingXYZ,
    #[error("gcd of two zero operator polynomials")]
    BothZero,
    #[error("matrix is not invertible: supplied inverse fails")]
    NotInvertible,
    #[error("not inverse: round trip of `{generator}` leaves residual {residual}")]
    NotInverse { generator: String, residual: NcPoly },
    #[error("generator name `{0}` already in alphabet")]
    NameClash(String),
    #[error("malformed elementary step: {0}")]
    MalformedStep(String),
    #[error("certificate construction failed: {0}")]
    CertificateFailure(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("operator polynomials are not coprime (gcd = {0})")]
    NotCoprime(String),
    #[error("map does not fix `z`")]
    DoesNotFixZ,
    #[error("degree bound {bound} is below the degree {degree} of the target")]
    BoundTooSmall { bound: usize, degree: usize },
    #[error("enumeration exceeds cap of {cap} products")]
    CapExceeded { cap: usize },
    #[error("linear piece resisted elementary reduction")]
    Stuck,
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
