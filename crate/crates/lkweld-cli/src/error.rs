//! Harness errors mapped onto process exit codes:
//! 0 success, 2 config/parse, 3 numerical (stage-tagged), 4 I/O.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<lkweld_core::verify::VerifyError> for CliError {
    fn from(e: lkweld_core::verify::VerifyError) -> Self {
        // VerifyError Display strings already carry the pipeline stage.
        CliError::Numerical(e.to_string())
    }
}

impl From<lkweld_core::evolution::EvolutionError> for CliError {
    fn from(e: lkweld_core::evolution::EvolutionError) -> Self {
        CliError::Numerical(format!("evolve: {e}"))
    }
}

impl From<lkweld_core::curve::CurveError> for CliError {
    fn from(e: lkweld_core::curve::CurveError) -> Self {
        CliError::Numerical(format!("curve: {e}"))
    }
}

impl From<lkweld_core::asymptotic::AsymptoticError> for CliError {
    fn from(e: lkweld_core::asymptotic::AsymptoticError) -> Self {
        CliError::Numerical(format!("asymptotic: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
