//! Reproduction driver: one command per figure family, CSV/JSON artifacts.

pub mod commands;
pub mod config;
mod output;

use std::path::PathBuf;

pub use commands::run;
pub use config::RunConfig;

use nanofiber::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Dispersion,
    Spectrum,
    Correlations,
    Evolve,
    Sweep,
    Analyze,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// Number of failed sweep cases.
    PartialFailure(usize),
}

/// 2 for configuration problems, 3 for numerical failures.
pub fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Config(_) | Error::Calibration(_) => 2,
        _ => 3,
    }
}
