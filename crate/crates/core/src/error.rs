use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a squarefree integer different from 0 and 1")]
    NotSquarefree(i64),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("not found: {0}")]
    NotFound(String),

    #[error("form has no double root modulo the prime")]
    NotDoubleRoot,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("singular curve: {0}")]
    Singular(String),

    #[error("integrality violation: {0}")]
    IntegralityViolation(String),

    #[error("curve has bad reduction at the prime")]
    BadReduction,

    #[error("reduction at a prime above 2 or 3 is not determined by this model")]
    UndeterminedSmallPrime,

    #[error("residue field of size {size} exceeds the cap {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("enumeration has {count} members, above the cap {cap}")]
    SetTooLarge { count: u128, cap: u128 },

    #[error("prime {0} does not fit in 64 bits")]
    PrimeTooLarge(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
