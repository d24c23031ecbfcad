use std::fmt;
use std::path::Path;

/// Failure classes, one per nonzero exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments.
    Usage(String),
    /// Input data or configuration failed validation.
    Validation(String),
    /// A computed check fell below its threshold.
    Assertion(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Assertion(_) => 3,
        }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Validation(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Assertion(m) => f.write_str(m),
        }
    }
}

impl From<tricoh::Error> for CliError {
    fn from(e: tricoh::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
