use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field of order {0} is too large")]
    FieldTooLarge(u64),
    #[error("element code {code} is outside a field of order {order}")]
    InvalidElement { code: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular curve model")]
    SingularCurve,
    #[error("function has a pole at {0}")]
    Pole(String),
    #[error("valuation of the zero function")]
    ZeroFunction,
    #[error("series precision exhausted while computing a valuation at {0}")]
    PrecisionExhausted(String),
    #[error("unknown place: {0}")]
    UnknownPlace(String),
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("construction hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("theorem-backed bound violated: {0}")]
    BoundViolated(String),
    #[error("invalid search configuration: {0}")]
    InvalidSearch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("document error: {0}")]
    Document(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
