use thiserror::Error;

/// Errors raised by the algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("degree cap {cap} exceeded (requested {requested})")]
    DegreeCap { cap: i64, requested: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("potential does not vanish at the point: {0}")]
    NonzeroPotential(String),
    #[error("not sigma-symmetric: {0}")]
    NotSymmetric(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("selection not closed under the differential: {0}")]
    NotSubcomplex(String),
    #[error("potential mismatch: {0}")]
    PotentialMismatch(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("computation failed: {0}")]
    Failed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
