//! File formats, reports and the command-line driver for the telesum
//! creative telescoping engine.

pub mod problem;
pub mod report;
pub mod run;

use std::path::PathBuf;

pub use problem::{format_problem, parse_problem, Options, ProblemFile};
pub use report::ResultReport;
pub use run::{run, Subcommand};

/// Errors surfaced by the command-line driver.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Engine(#[from] telesum_core::error::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    /// Process exit status: 2 parse, 3 semantic, 4 not D-finite, 5 singular
    /// shift matrix, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use telesum_core::error::Error as E;
        match self {
            CliError::Engine(E::Parse { .. }) => 2,
            CliError::Engine(E::Semantic(_)) => 3,
            CliError::Engine(E::NotDFinite(_)) => 4,
            CliError::Engine(E::SingularShiftMatrix(_)) => 5,
            _ => 1,
        }
    }
}
