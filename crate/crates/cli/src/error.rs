use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const CERTIFICATION: u8 = 2;
    pub const IO: u8 = 3;
    pub const MISSING_ZEROSET: u8 = 4;
    pub const CACHE: u8 = 5;
    pub const COVERAGE: u8 = 6;
    pub const CHECK_FAILED: u8 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("cannot write {path}: {message}")]
    Write { path: PathBuf, message: String },
    #[error("zero set {0} not found; run `lfunlab zeros` for this instance first")]
    MissingZeroSet(PathBuf),
    #[error(transparent)]
    Lib(#[from] lfunlab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use lfunlab::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Read { .. } | CliError::Write { .. } => exit::IO,
            CliError::MissingZeroSet(_) => exit::MISSING_ZEROSET,
            CliError::Lib(e) => match e {
                E::IncompleteScan { .. } | E::ContourResolution(_) => exit::CERTIFICATION,
                E::Io(_) => exit::IO,
                E::Resource { .. } => exit::CACHE,
                E::Coverage(_) => exit::COVERAGE,
                _ => exit::USAGE,
            },
        }
    }
}
