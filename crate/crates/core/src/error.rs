use std::io;
use std::path::PathBuf;

use crate::diagnostic::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("nothing to analyze")]
    NothingToAnalyze,

    #[error("empty package")]
    EmptyPackage,

    #[error("no packages")]
    NoPackages,

    /// Bad input supplied by the user: missing paths, malformed config, bad flags.
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("model failed validation with {} error(s); first: {}", .0.len(), .0.first().map(|d| d.message.as_str()).unwrap_or(""))]
    InvalidModel(Vec<Diagnostic>),

    #[error("growth summary needs at least two rows")]
    TooFewRows,

    #[error("all {0} versions failed to analyze")]
    AllVersionsFailed(usize),

    /// A broken invariant inside the analyzer rather than bad user input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
