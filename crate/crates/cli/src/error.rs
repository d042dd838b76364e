//! CLI error type mapping failures to exit codes.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// A flag violated its invariant; nothing was computed. Exit 2.
    Usage(String),
    /// A solver failed during computation. Exit 3.
    Numeric(String),
    /// The verification suite found a violated tolerance. Exit 4.
    Verification(String),
    /// Output could not be written. Exit 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "invalid arguments: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            CliError::Verification(msg) => write!(f, "verification failure: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
