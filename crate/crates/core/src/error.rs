use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("incompatible exponent denominators {left} and {right}")]
    IncompatibleDenominators { left: u32, right: u32 },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("leading coefficient is not a unit")]
    NonUnitLeading,

    #[error("coefficient at exponent {numerator}/{denom} lies outside the supported residue class")]
    SupportViolation { numerator: i64, denom: u32 },

    #[error("series too short: need exponent numerator {needed}, known below {available}")]
    PrecisionTooShort { needed: i64, available: i64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("linear system is inconsistent: {0}")]
    InconsistentSystem(String),

    #[error("validation failed at n = {n}: expected {expected}, got {got}")]
    ValidationMismatch { n: u64, expected: String, got: String },

    #[error("series does not converge fast enough at the sample point (term ratio {ratio:.4})")]
    Convergence { ratio: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
