use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("malformed literal: {0}")]
    MalformedLiteral(String),
    #[error("point lies outside the space: {0}")]
    OutOfSpace(String),
    #[error("fuel exhausted after {fuel} steps")]
    FuelExhausted { fuel: u64 },
    #[error("space `{0}` has no ercs")]
    NoErcs(String),
    #[error("space `{0}` has no metric structure")]
    NoMetric(String),
    #[error("malformed finite space: {0}")]
    MalformedSpace(String),
    #[error("empty set argument")]
    EmptySetArgument,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
