use std::path::PathBuf;

use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unsupported path: {0}")]
    UnsupportedPath(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    /// Conditional probability with an empty conditioning set.
    #[error("undefined conditional: {0}")]
    UndefinedConditional(String),

    #[error("division error: {0}")]
    Division(String),

    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },

    #[error("i/o error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 2 covers validation and schema failures, 3 a visibility estimate with no
    /// conditioning shots, 4 filesystem failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UndefinedConditional(_) => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
