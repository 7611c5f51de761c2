use thiserror::Error;

/// Errors raised anywhere in the search pipeline.
#[derive(Debug, Error)]
pub enum QasError {
    #[error("index error: {0}")]
    Index(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QasError>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::QasError::$variant(format!($($arg)*)))
    };
}
pub(crate) use bail;
