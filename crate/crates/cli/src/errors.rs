//! Process-level error classification.
//!
//! Every failure surfaced by the binary maps onto one of three exit codes so
//! scripts can distinguish a bad invocation from a bad run: `2` for
//! configuration problems (flags, config files, invalid parameter
//! combinations), `3` for numerical failures inside a computation, and `4`
//! for I/O failures. Success is `0`.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] qcs_core::Error),
    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// Classify a core error raised while turning user-supplied parameters
    /// into a computation: inconsistent parameters are configuration
    /// problems (exit 2), anything that failed inside the numerics keeps
    /// the numerical code (exit 3).
    pub fn from_parameters(e: qcs_core::Error) -> Self {
        match &e {
            qcs_core::Error::InvalidSpec(_)
            | qcs_core::Error::UnsupportedMatrix { .. }
            | qcs_core::Error::DimensionMismatch { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }

    /// Exit code contract: 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}
