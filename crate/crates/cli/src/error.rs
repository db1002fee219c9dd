use std::io;
use std::path::{Path, PathBuf};

use prismtrack_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 2;
    pub const INSUFFICIENT: u8 = 3;
    pub const DEGENERATE: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {message}", path.display())]
    File { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: CoreError },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Insufficient(String),
    #[error("{context}: {source}")]
    Core { context: String, source: CoreError },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

fn core_code(e: &CoreError) -> u8 {
    match e {
        CoreError::Degenerate { .. } => exit::DEGENERATE,
        CoreError::TooFewPoints { .. } | CoreError::OutOfRange { .. } | CoreError::Gap { .. } | CoreError::EmptySummary => {
            exit::INSUFFICIENT
        }
        _ => exit::INPUT,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::File { .. } | CliError::Config(_) => exit::INPUT,
            CliError::Insufficient(_) => exit::INSUFFICIENT,
            CliError::Data { source, .. } | CliError::Core { source, .. } => core_code(source),
        }
    }

    pub fn io(path: &Path, source: io::Error) -> CliError {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn file(path: &Path, message: impl Into<String>) -> CliError {
        CliError::File { path: path.to_path_buf(), message: message.into() }
    }

    pub fn data(path: &Path, source: CoreError) -> CliError {
        CliError::Data { path: path.to_path_buf(), source }
    }

    pub fn core(context: impl Into<String>, source: CoreError) -> CliError {
        CliError::Core { context: context.into(), source }
    }
}
