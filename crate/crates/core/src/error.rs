use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("table `{name}` is defined up to {len}, but {needed} is required")]
    TableTooShort { name: String, len: usize, needed: usize },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("unsupported parameter for `{name}`: {reason}")]
    UnsupportedParameter { name: String, reason: String },

    #[error("invalid identity case: {0}")]
    InvalidCase(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}
