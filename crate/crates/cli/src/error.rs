use std::fmt;
use std::process::ExitCode;

use srbflow_core::FlowError;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config keys (exit 2).
    Usage(String),
    /// The requested initial state or configuration is invalid (exit 3).
    Validation(String),
    /// The flow left the admissible region or a check errored (exit 4).
    Runtime(String),
    /// Reading or writing a file failed (exit 5).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Self::Usage(_) => 2,
            Self::Validation(_) => 3,
            Self::Runtime(_) => 4,
            Self::Io(_) => 5,
        })
    }

    /// Errors raised while setting a run up are validation failures.
    pub fn setup(err: FlowError) -> Self {
        Self::Validation(err.to_string())
    }

    /// Errors raised while a run is in progress are runtime failures,
    /// except for configuration mistakes that slipped through.
    pub fn during_run(err: FlowError) -> Self {
        match err {
            FlowError::Invalid(msg) => Self::Validation(msg),
            other => Self::Runtime(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Validation(m) => write!(f, "invalid input: {m}"),
            Self::Runtime(m) => write!(f, "runtime error: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Io(e.to_string())
    }
}
