//! Experiment driver: resolves a TOML config into a concrete run, executes
//! it on the chosen backend, and writes a JSON result document (plus an
//! optional CSV of the plotted series).
//!
//! The binary `floqsim` is a thin wrapper over [`run_experiment`]. Library
//! callers (tests, notebooks) can build a [`config::RunConfig`] directly
//! and inspect the returned [`result::ResultDoc`] in memory.

pub mod config;
pub mod experiments;
pub mod fit;
pub mod result;
pub mod runner;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad configuration: unknown keys, invalid values, inconsistent
    /// experiment/option combinations. Exit code 2.
    #[error("config: {0}")]
    Config(String),
    /// A simulation or post-processing failure at run time. Exit code 3.
    #[error("simulation: {0}")]
    Sim(String),
    /// A curve fit failed to converge or had too few points. Exit code 3.
    #[error("fit: {0}")]
    Fit(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Sim(_) | HarnessError::Fit(_) => 3,
        }
    }
}

impl From<floqsim_fbs::FbsError> for HarnessError {
    fn from(e: floqsim_fbs::FbsError) -> HarnessError {
        HarnessError::Sim(e.to_string())
    }
}

impl From<floqsim_tableau::TableauError> for HarnessError {
    fn from(e: floqsim_tableau::TableauError) -> HarnessError {
        HarnessError::Sim(e.to_string())
    }
}

impl From<floqsim_vector::VectorError> for HarnessError {
    fn from(e: floqsim_vector::VectorError) -> HarnessError {
        HarnessError::Sim(e.to_string())
    }
}

impl From<floqsim_tomo::TomoError> for HarnessError {
    fn from(e: floqsim_tomo::TomoError) -> HarnessError {
        HarnessError::Sim(e.to_string())
    }
}

impl From<floqsim_noise::NoiseError> for HarnessError {
    fn from(e: floqsim_noise::NoiseError) -> HarnessError {
        HarnessError::Sim(e.to_string())
    }
}

impl From<floqsim_core::CoreError> for HarnessError {
    fn from(e: floqsim_core::CoreError) -> HarnessError {
        HarnessError::Sim(e.to_string())
    }
}

pub use config::{ExperimentKind, RunConfig};
pub use result::ResultDoc;

/// Run one experiment to completion.
pub fn run_experiment(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    experiments::run(cfg)
}
