//! Command implementations behind the `hetbell` binary.
//!
//! Each command returns an [`OutputRecord`]; rendering to CSV or JSON and
//! parsing those renderings back live in [`output`].

pub mod commands;
pub mod config;
pub mod output;

use thiserror::Error;

pub use commands::{Family, PolyKind};
pub use output::{Format, OutputRecord, Payload};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hetbell::Error),
    #[error("family `{0}` needs --dist")]
    MissingDistribution(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
