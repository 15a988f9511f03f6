use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] sqfi_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("at {axis1} = {value1}, {axis2} = {value2}: {source}")]
    Point {
        axis1: String,
        value1: f64,
        axis2: String,
        value2: f64,
        #[source]
        source: sqfi_core::Error,
    },

    #[error("worker pool: {0}")]
    Pool(String),
}

impl HarnessError {
    /// 2 for numerical non-convergence, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(e) | HarnessError::Point { source: e, .. } if e.is_convergence() => {
                2
            }
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
