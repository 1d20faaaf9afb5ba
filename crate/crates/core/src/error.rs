use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("observable expectation has imaginary part {0:e}")]
    ComplexExpectation(f64),

    #[error("no analytic bound for n = {n}, k = {k}")]
    NoAnalyticBound { n: usize, k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample {0} cannot be reconstructed as a density matrix")]
    Unreconstructible(usize),

    #[error("rejection sampling gave up after {0} attempts")]
    SamplingExhausted(u64),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config error: {0}")]
    Config(String),

    #[error("no bound found: the model predicts a single class on every interval")]
    NoBoundFound,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error: 1 for usage and config problems,
    /// 3 for numerical failures, 2 for everything data-related.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) | Error::NoAnalyticBound { .. } => 1,
            Error::NonFinite(_) => 3,
            _ => 2,
        }
    }
}
