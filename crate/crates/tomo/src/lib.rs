//! Logical tomography: density-matrix reconstruction from two-qubit basis
//! histograms, Pauli transfer matrices, and the fidelity formulas built on
//! them.

mod basis;
mod fidelity;
mod lqst;
mod process;
mod state;

pub use basis::{basis_label, two_qubit_pauli, BASIS_AXES, PAULI_LABELS};
pub use fidelity::process_and_gate_fidelity;
pub use lqst::{counts_from_json, counts_to_json, lqst, slot_of, BasisCounts};
pub use process::{
    ideal_cnot_ptm, ideal_identity_ptm, lqpt, lqpt_options, process_inputs, ptm_from_unitary,
    InputState, LqptOptions, PauliVector, TransferMatrix,
};
pub use state::{state_fidelity, trace_distance, DensityMatrix};

/// Errors from reconstruction routines.
#[derive(Debug, thiserror::Error)]
pub enum TomoError {
    #[error("histogram for basis {0} sums to zero")]
    EmptyHistogram(String),
    #[error("missing histogram for basis {0}")]
    MissingBasis(String),
    #[error("unknown basis label {0}")]
    UnknownBasis(String),
    #[error("density matrix has zero trace")]
    ZeroTrace,
    #[error("not a physical state: {0}")]
    InvalidState(String),
    #[error("process tomography needs 16 input-output pairs, got {0}")]
    WrongPairCount(usize),
    #[error("input states are rank deficient (condition number {cond:.3e})")]
    RankDeficient { cond: f64 },
    #[error("linear solve failed")]
    EigenFailure,
    #[error("histogram JSON malformed: {0}")]
    BadJson(String),
}
