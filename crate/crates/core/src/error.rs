use thiserror::Error;

/// Location and description of a literal that failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset} near `{token}`: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub token: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid prime {p}: {reason}")]
    InvalidPrime { p: u64, reason: &'static str },

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("prime {p} must exceed the degree {degree}")]
    PrimeTooSmall { p: u64, degree: u32 },

    #[error("mismatched {what}: {left} vs {right}")]
    Mismatch { what: &'static str, left: usize, right: usize },

    #[error("degree underflow: {degree} - {fixed}")]
    DegreeUnderflow { degree: u32, fixed: u32 },

    #[error("operation requires ambient dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("degenerate point configuration: {0}")]
    Degenerate(String),

    #[error("sampler exhausted after {attempts} attempts: {reason}")]
    SamplerExhausted { attempts: usize, reason: &'static str },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("input outside the domain of the operation: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
