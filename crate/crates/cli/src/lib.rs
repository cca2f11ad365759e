//! Scenario files, reports and verification suites for the `tdlc` binary.

pub mod report;
pub mod scenario;
pub mod suites;

use tdlc::TdlcError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(TdlcError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<TdlcError> for CliError {
    fn from(e: TdlcError) -> Self {
        match e {
            TdlcError::Invalid(m) => CliError::Invalid(m),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Core(e) if e.is_unresolved() => 3,
            _ => 1,
        }
    }
}
