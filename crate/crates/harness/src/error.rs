use std::path::PathBuf;

use alphamu_core::WorldError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}:{line}: {message}")]
    DealFile { path: PathBuf, line: usize, message: String },
    #[error("bad input: {0}")]
    Input(String),
    #[error("deal generation gave up after {candidates} candidates: {accepted} accepted, {rejected_by_auction} failed the auction, {rejected_by_filter} failed the win-rate filter")]
    GenerationExhausted {
        candidates: u64,
        accepted: usize,
        rejected_by_auction: u64,
        rejected_by_filter: u64,
    },
    #[error("deal {index} (seed {seed:#018x}): {source}")]
    Engine {
        index: usize,
        seed: u64,
        #[source]
        source: WorldError,
    },
    #[error("report: {0}")]
    Report(#[from] csv::Error),
}

impl HarnessError {
    /// Process exit status for the error category. Usage errors exit with
    /// 2 from the argument parser.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Io { .. } | HarnessError::Report(_) => 3,
            HarnessError::Config(_) => 4,
            HarnessError::DealFile { .. } | HarnessError::Input(_) => 5,
            HarnessError::GenerationExhausted { .. } => 6,
            HarnessError::Engine { .. } => 7,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> HarnessError {
        HarnessError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
