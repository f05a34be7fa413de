//! Command-line front end: configuration, CSV ingestion and the
//! `simulate`, `select-order`, `compare` and `forecast` commands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod io;

use thiserror::Error;

pub use commands::{cmd_compare, cmd_forecast, cmd_select_order, cmd_simulate, CompareRun, Manifest};
pub use config::{ExperimentConfig, OrderSpec, OutputFormat};
pub use io::{load_csv, ColumnSelector, LoadError};

/// Command failure, classified by process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    /// 1 configuration, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Data(e.to_string())
    }
}
