//! Library side of the `milnor` command-line tool.

pub mod certify;
pub mod scan;
pub mod verify;

use std::fmt;

/// Errors surfaced to the command line, each tied to an exit code:
/// usage problems exit 2, failed mathematical checks exit 1, and internal
/// consistency defects (two implementations disagreeing, rank accounting
/// violations) exit 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Check(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Check(msg) => write!(f, "check failed: {msg}"),
            CliError::Internal(msg) => write!(f, "internal consistency defect: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
