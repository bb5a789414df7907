//! Command implementations behind the `mvvol` binary.
//!
//! Every command renders into a `String`; the binary only prints it. Output
//! carries no timings or cache status, so it is byte-identical across runs,
//! worker counts and cache states.

pub mod cache;
pub mod commands;
pub mod render;
pub mod selftest;

use strata_core::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const SELFTEST_FAILED: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0} (raise the limit with --max-weight)")]
    Infeasible(String),
    #[error("cache: {0}")]
    Cache(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Cache(_) => exit::INVALID,
            CliError::Infeasible(_) => exit::INFEASIBLE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}
