//! Library side of the `upsilon-lab` command: knot specifications, reports,
//! census scanning and plotting. `main.rs` only parses arguments.

pub mod census;
pub mod plot;
pub mod report;
pub mod spec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
