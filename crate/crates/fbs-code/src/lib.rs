//! Floquet Bacon-Shor code: circuits, sign-frame post-processing, error
//! detection, logical gates, and fault analysis on a 3x3 data grid.
//!
//! The code stores one static logical qubit plus one dynamical logical
//! qubit whose operator representatives move under the period-4 schedule
//! of two-body check measurements. This crate builds the experiment
//! circuits (encoding, stabilization rounds, logical gates, final
//! transversal readout), and compiles the classical side: folding raw
//! ancilla outcomes into check values, accumulating the measurement sign
//! frame, deriving detectors, and evaluating frame-corrected logical
//! observables per shot.

pub mod bs;
pub mod decode;
pub mod encode;
pub mod faults;
pub mod frame;
pub mod gates;
pub mod geometry;
pub mod lower;
pub mod measure;
pub mod plan;

pub use bs::{BsGate, BsPlan, BsShot, BsSpec, BsState};
pub use frame::{DerivedValue, OutcomeBits, TagMask};
pub use gates::LogicalGate;
pub use lower::{Assembler, GroupItem, Lowering, Mediator};
pub use plan::{ExperimentPlan, PlanSpec, ShotEval, StateSpec};

use floqsim_core::CoreError;
use floqsim_tableau::TableauError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FbsError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("experiment needs at least one stabilization round")]
    NoRounds,
    #[error("too many measurements in one circuit: {0}")]
    TooManyMeasurements(usize),
    #[error("ran out of reserved one-shot ancillas")]
    FreshAncillasExhausted,
    #[error("{gate} must be placed after a round with index {want} mod 4, got round {got}")]
    GatePlacement { gate: &'static str, want: usize, got: usize },
    #[error("gate scheduled after round {0}, which is beyond the experiment")]
    GateBeyondRounds(usize),
    #[error("final readout needs qubit {qubit} in two bases at once")]
    BasisConflict { qubit: usize },
    #[error("identity is not a logical measurement axis")]
    IdentityAxis,
    #[error("encoding inconsistency: {0}")]
    Encoding(String),
    #[error("fault propagation hit a non-Clifford instruction: {0}")]
    NonCliffordFault(String),
}
