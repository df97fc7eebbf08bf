use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A request exceeds what a generator or cache can supply.
    #[error("capacity: {what} requires {required}, available {available}")]
    Capacity {
        what: String,
        required: usize,
        available: usize,
    },

    /// Positions or lengths outside the backing sequence.
    #[error("out of bounds: {0}")]
    Bounds(String),

    /// Malformed digit, bit, model or config file. `offset` is a byte offset
    /// into the file.
    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    Divergence { epoch: usize, loss: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(offset: usize, message: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Capacity { .. } | Error::Bounds(_) => 3,
            Error::Divergence { .. } => 4,
            _ => 1,
        }
    }
}
