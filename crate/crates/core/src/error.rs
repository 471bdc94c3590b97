use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("size error: {what} has {size} elements, cap is {cap}")]
    Size { what: String, size: u128, cap: u128 },
    #[error("level {level} of {chain} is not enumerable")]
    Enumeration { chain: String, level: usize },
    #[error("unsupported Young function: {0}")]
    UnsupportedYoung(String),
    #[error("elements belong to different group chains")]
    ChainMismatch,
    #[error("weight {weight} is not defined at level {level}")]
    WeightRange { weight: String, level: usize },
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
