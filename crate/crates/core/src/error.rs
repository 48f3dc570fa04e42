use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,

    #[error("matrix is already TF-IDF weighted and normalized")]
    AlreadyNormalized,

    #[error("rank k={k} out of range for a {rows}x{cols} matrix")]
    RankOutOfRange { k: usize, rows: usize, cols: usize },

    #[error("term row {row} is all zero; NNDSVD needs every term to occur")]
    ZeroRow { row: usize },

    #[error("H column {column} is all zero, no cluster can be assigned")]
    UnassignableDocument { column: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("factorization failed for k={k}, sample {sample}: {source}")]
    Run {
        k: usize,
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end: 1 usage, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::RankOutOfRange { .. } => 1,
            Error::Numerical(_) => 3,
            Error::Run { source, .. } => match source.exit_code() {
                1 => 1,
                2 => 2,
                _ => 3,
            },
            _ => 2,
        }
    }
}
