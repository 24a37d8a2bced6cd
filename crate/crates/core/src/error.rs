//! Crate-wide error type and exit-code mapping.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad configuration or usage: unknown rule ids, conflicting flags,
    /// unreadable user-supplied paths. Maps to exit code 2.
    #[error("{0}")]
    Config(String),

    /// I/O failure on a user-supplied path. Maps to exit code 2.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input handed to the consensus harness (findings files,
    /// mapping tables, timing tables). Maps to exit code 2.
    #[error("{path}: {message}")]
    Ingest { path: String, message: String },

    /// A bug or an unrecoverable internal condition. Maps to exit code 3.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn ingest(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Ingest {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code for this error: 2 for configuration/usage/input
    /// problems, 3 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } | Error::Ingest { .. } => 2,
            Error::Internal(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
