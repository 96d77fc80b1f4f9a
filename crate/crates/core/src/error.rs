use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("survival function underflow at x = {0}")]
    SurvivalUnderflow(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("grid needs at least {needed} points, got {got}")]
    GridTooShort { needed: usize, got: usize },

    #[error("grid point {0} lies outside the admissible range")]
    GridOutsideDomain(f64),

    #[error("dependence mismatch: {0}")]
    DependenceMismatch(String),

    #[error("unknown theorem id '{id}'; valid ids: {valid}")]
    UnknownTheorem { id: String, valid: String },

    #[error("unknown tag '{0}'")]
    UnknownTag(String),

    #[error("too many components for subset enumeration: {0} (max 12)")]
    TooManyComponents(usize),

    #[error("scenario error: {0}")]
    Scenario(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Scenario(e.to_string())
    }
}
