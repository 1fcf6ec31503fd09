//! Stabilizer tableau simulator.
//!
//! Tracks the stabilizer group of an n-qubit state under Clifford gates and
//! Pauli measurements in O(n^2) per measurement, using the standard
//! destabilizer/stabilizer tableau with packed bit rows. This is the fast
//! backend: millions of noisy shots per minute on the codes used here. The
//! dense statevector simulator in `floqsim-vector` serves as its oracle.

pub mod run;
pub mod tableau;

pub use run::{execute_record, run_shot};
pub use tableau::Tableau;

use floqsim_core::CoreError;
use floqsim_noise::NoiseError;

/// Errors from tableau construction and execution.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableauError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    /// Instruction has no Clifford action (continuous rotation at a generic
    /// angle, for example).
    #[error("instruction is not Clifford: {0}")]
    NotClifford(String),
    /// Internal consistency check failed; indicates a simulator bug.
    #[error("tableau invariant violated: {0}")]
    InvariantViolated(String),
}
