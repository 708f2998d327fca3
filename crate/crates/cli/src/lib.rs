//! Library half of the `pielm` command: configuration, runs, sweeps and the
//! case table. `main.rs` only parses flags and maps errors to exit codes.

pub mod config;
pub mod list;
pub mod output;
pub mod run;

use std::fmt;

/// Exit code 1.
pub const EXIT_USAGE: i32 = 1;
/// Exit code 2.
pub const EXIT_SOLVER: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Solver(pielm::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Solver(e) => write!(f, "solver failure: {e}"),
        }
    }
}

impl std::error::Error for CliError {}
