//! Circuit-level noise model, the instrumentation pass that attaches noise
//! sites to bare circuits, the error-budget engine, and the physical
//! baseline error formula.

mod budget;
mod model;

pub use budget::{error_budget, Component, ComponentBudget, ErrorBudget};
pub use model::{instrument, physical_baseline, NoiseModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NoiseError {
    #[error(transparent)]
    Core(#[from] floqsim_core::CoreError),
    #[error("rate {name}={value} outside [0,1]")]
    BadRate { name: &'static str, value: f64 },
    #[error("circuit already carries noise sites; refusing to instrument twice")]
    AlreadyInstrumented,
    #[error("duration {name}={value} must be positive and finite")]
    BadDuration { name: &'static str, value: f64 },
    #[error("non-finite value from the fidelity functional at {0}; increase the shot count")]
    NonFiniteEvaluation(String),
}
