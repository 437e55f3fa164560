//! Library surface of the `thermo-neutral` binary: config parsing and the
//! four command implementations, exposed so integration tests can drive
//! them directly.

pub mod commands;
pub mod config;
pub mod csvfmt;

use thiserror::Error;

/// Command outcomes map onto process exit codes: 2 for configuration
/// problems, 3 for numeric non-convergence, 4 for violated preconditions.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<thermo_neutral_core::ThermoError> for CliError {
    fn from(e: thermo_neutral_core::ThermoError) -> Self {
        use thermo_neutral_core::ThermoError::*;
        match e {
            NoConvergence { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<thermo_neutral_core::SurfaceError> for CliError {
    fn from(e: thermo_neutral_core::SurfaceError) -> Self {
        use thermo_neutral_core::SurfaceError::*;
        match e {
            Thermo(inner) => inner.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<thermo_neutral_core::MmrneError> for CliError {
    fn from(e: thermo_neutral_core::MmrneError) -> Self {
        use thermo_neutral_core::MmrneError::*;
        match e {
            Surface(inner) => inner.into(),
            NoConvergence { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<thermo_neutral_core::VerifyError> for CliError {
    fn from(e: thermo_neutral_core::VerifyError) -> Self {
        CliError::Precondition(e.to_string())
    }
}
