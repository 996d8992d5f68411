use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("pencil integrity check failed: {0}")]
    Integrity(String),
    #[error("pencil has all coefficients equal to zero")]
    ZeroPencil,
    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: String, hi: String },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("cannot parse {0:?} as a number")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
