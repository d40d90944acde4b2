use mushy_core::verify::VerifyError;
use mushy_core::{ModelError, SolveError};
use thiserror::Error;

/// Outcome classes; each maps to exactly one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("restriction failure: {0}")]
    Restriction(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failure: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Restriction(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Model(m) => m.into(),
            SolveError::Restriction { .. } => CliError::Restriction(e.to_string()),
            SolveError::Root(_) | SolveError::SpecFun(_) | SolveError::Direct(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::BadGrid(_) | VerifyError::OutsideSolid { .. } => CliError::Input(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
