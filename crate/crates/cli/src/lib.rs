//! Library side of the `toffoli` command: every subcommand is a function of a
//! [`RunConfig`] returning the exact bytes to emit.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

pub use commands::{cmd_chi, cmd_fidelity, cmd_run, cmd_sweep, cmd_truth_table, cmd_unitary, SweepAxis};
pub use config::{OutputFormat, RunConfig, SequenceSource};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] toffoli_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

/// Text to emit plus the process exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub body: String,
    /// One-line human summary, written to stderr by the binary.
    pub summary: String,
    pub passed: bool,
}

impl CommandOutput {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}
