use std::path::PathBuf;

use persuade_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("method not applicable: {0}")]
    NotApplicable(String),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const VALIDATION: u8 = 2;
    pub const PRECONDITION: u8 = 3;
    pub const MISMATCH: u8 = 4;
    pub const SIZE_LIMIT: u8 = 5;
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => exit::VALIDATION,
            CliError::NotApplicable(_) => exit::PRECONDITION,
            CliError::Core(e) => match e {
                Error::Validation(_) | Error::Parse(_) | Error::UnknownExample(_) | Error::InvalidParameter(_) => exit::VALIDATION,
                Error::NotSymmetric
                | Error::WrongActionCount { .. }
                | Error::PositiveExternalityViolated(_)
                | Error::NonMonotoneSender { .. } => exit::PRECONDITION,
                Error::CharacterizationMismatch { .. } | Error::OracleUnsound(_) => exit::MISMATCH,
                Error::SizeLimitExceeded { .. } => exit::SIZE_LIMIT,
                _ => exit::FAILED,
            },
        }
    }
}
