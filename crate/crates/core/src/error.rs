use thiserror::Error;

/// Errors produced by the library.
///
/// Verification failures indicate an internal defect (a certificate or
/// witness that did not check out) rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field specification mismatch: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("first matrix does not have simple spectrum in the field")]
    NotSimpleSpectrum,
    #[error("field has {p} elements but matrices are {n}x{n}; need at least n distinct scalars")]
    FieldTooSmall { p: u64, n: usize },
    #[error("resource guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("graph is not a forest")]
    NotAForest,
    #[error("invalid star matrix: {0}")]
    InvalidStarMatrix(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
