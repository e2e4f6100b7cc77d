use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Every variant maps to a stable string code (see [`Error::code`]) so the CLI
/// can emit machine-readable error documents.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("inadmissible raffle: {0}")]
    Admissibility(String),
    #[error("scene has no bodies")]
    EmptyScene,
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "Domain",
            Error::Config(_) => "Config",
            Error::Degenerate(_) => "Degenerate",
            Error::Numeric(_) => "Numeric",
            Error::Admissibility(_) => "Admissibility",
            Error::EmptyScene => "EmptyScene",
            Error::Io { .. } => "Io",
            Error::Internal(_) => "Internal",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
