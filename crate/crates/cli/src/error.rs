//! Process-level error taxonomy. Every failure the binary can hit maps to
//! one of three exit codes: 1 for failed numeric checks, 2 for rejected
//! input, 3 for filesystem trouble (success is 0).

use std::fmt;

use decoherence_core::CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Rejected input: bad flag or config value, degenerate time grid,
    /// unphysical initial state. Exit code 2.
    Invalid(String),
    /// A numeric check failed or a computation did not converge. Exit
    /// code 1.
    Check(String),
    /// Filesystem failure while reading config or writing output. Exit
    /// code 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) | CliError::Check(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::InvalidParameter { .. }
            | CoreError::Domain { .. }
            | CoreError::PositivityViolation { .. } => CliError::Invalid(err.to_string()),
            CoreError::Io(inner) => CliError::Io(inner.to_string()),
            other => CliError::Check(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
