use std::fmt;
use std::process::ExitCode;

use tropsand_core::Error;

/// Failures of a subcommand, each mapped to one exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input formats or inputs outside the domain.
    Config(String),
    /// `--assert` was given and the check failed.
    Assertion(String),
    /// A budget ran out or an experiment never settled.
    Budget(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Assertion(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Io(_) | CliError::Internal(_) => 1,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Assertion(m) => write!(f, "assertion failed: {m}"),
            CliError::Budget(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => CliError::Config(e.to_string()),
            Error::Budget { .. } | Error::NotStabilized(_) => CliError::Budget(e.to_string()),
            Error::Contract(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
