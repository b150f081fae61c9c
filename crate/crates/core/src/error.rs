use thiserror::Error;

/// Errors produced by the numerical library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("chart mismatch: element is stored in {stored} but {requested} was requested")]
    ChartMismatch { stored: String, requested: String },

    #[error("accuracy check failed: {0}")]
    Accuracy(String),

    #[error("grid does not cover the support: {0}")]
    Coverage(String),

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
