//! Dense statevector backend.
//!
//! Serves two roles: the brute-force oracle that certifies every Clifford
//! path result, and the only backend able to run the non-Clifford logical
//! rotation circuits. States stay small (circuits here use at most ~21
//! qubits), so kernels favor clarity plus simple stride loops over anything
//! exotic.

mod enumerate;
mod sample;
mod state;

pub use enumerate::{enumerate_outcomes, enumerate_with, Leaf, DEFAULT_BRANCH_CAP};
pub use sample::sample_record;
pub use state::StateVector;

use floqsim_core::CoreError;

#[derive(Debug, thiserror::Error)]
pub enum VectorError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("instruction not unitary; route measurements and noise through the executor")]
    NotUnitary,
    #[error("cannot renormalize a zero-probability branch")]
    ZeroProbabilityBranch,
    #[error("operator must have sign +1 or -1 for measurement/expectation")]
    NonHermitianOperator,
    #[error("outcome tree exceeded the branch cap of {0}")]
    BranchCapExceeded(usize),
    #[error("stochastic NoiseSite not allowed in exact enumeration")]
    NoiseInEnumeration,
    #[error("qubit count {0} too large for the dense backend (max {1})")]
    TooLarge(usize, usize),
}

/// Hard qubit ceiling for allocating a dense state.
pub const MAX_DENSE_QUBITS: usize = 24;
