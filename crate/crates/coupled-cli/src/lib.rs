//! Experiment harness around `coupled-core`: seeded instance generation,
//! Monte Carlo trials with optimality-ratio bookkeeping, reproducible CSV
//! and JSON outputs, and the `coupled` command-line front end.

use thiserror::Error;

pub mod config;
pub mod experiment;
pub mod generate;
pub mod trial;

/// Harness-level error split: configuration problems exit with code 1,
/// runtime and I/O problems with code 2.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("runtime error: {0}")]
    Core(#[from] coupled_core::Error),

    #[error("io error: {0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Core(_) | HarnessError::Io(_) => 2,
        }
    }
}
