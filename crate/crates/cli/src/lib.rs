//! Configuration-driven experiment runner for truncated inverse problems.

use std::fmt;

pub mod config;
pub mod datum;
pub mod demo;
pub mod output;
pub mod presets;
pub mod run;

pub use config::ExperimentConfig;
pub use demo::{demo, DemoName, DemoReport};
pub use run::{run, RunOutput};

/// Failure classes, each with its own exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable or invalid configuration.
    Config(String),
    /// The configuration asks for something the operator cannot do.
    Capability(String),
    /// Failure during computation.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Capability(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Capability(m) => write!(f, "capability mismatch: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hilbert_trunc::Error> for CliError {
    fn from(e: hilbert_trunc::Error) -> Self {
        match e {
            hilbert_trunc::Error::CapabilityAbsent { .. } => CliError::Capability(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}
