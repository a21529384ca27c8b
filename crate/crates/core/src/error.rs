use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("heart mismatch: {0} vs {1}")]
    HeartMismatch(i64, i64),
    #[error("heart {heart} outside the admissible range: {reason}")]
    HeartOutOfRange { heart: i64, reason: String },
    #[error("(0:0:0) is not a point of the projective plane")]
    ZeroPoint,
    #[error("window membership fails for heart {target}: {diagnostics}")]
    Membership { target: i64, diagnostics: String },
    #[error("internal postcondition violated: {0}")]
    Postcondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid prime: {0}")]
    InvalidPrime(String),
    #[error("denominator of {value} vanishes modulo {prime}")]
    DenominatorVanishes { prime: u64, value: String },
    #[error("no value for variable {0}")]
    MissingVariable(String),
    #[error("invalid range [{0}, {1}]: {2}")]
    InvalidRange(i64, i64, String),
    #[error("window extension to {target} needs three consecutive values next to it")]
    InsufficientWindow { target: i64 },
}

impl Error {
    /// Internal errors signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Postcondition(_))
    }
}
