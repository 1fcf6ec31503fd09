//! Pauli algebra in the symplectic (x,z)-bit representation plus the
//! backend-agnostic circuit instruction set shared by every simulator.
//!
//! All types here are immutable value types and safe to share across threads.

pub mod circuit;
pub mod pauli;
pub mod record;

pub use circuit::{Circuit, Instruction, NoiseKind};
pub use pauli::{parity_product, phase_exponent_product, Pauli, PauliString};
pub use record::MeasRecord;

/// Well-mixed per-shot RNG seed derived from a run seed and a shot index.
///
/// Both backends key their shot streams this way so results are
/// reproducible regardless of how shots are distributed over threads.
pub fn derive_shot_seed(seed: u64, shot: u64) -> u64 {
    fn splitmix64(mut x: u64) -> u64 {
        x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^ (x >> 31)
    }
    splitmix64(seed ^ splitmix64(shot))
}

/// Errors from constructing or combining core objects.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("qubit count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("at most 64 qubits supported, got {0}")]
    TooManyQubits(usize),
    #[error("duplicate qubit {0} in operator support")]
    DuplicateQubit(usize),
    #[error("duplicate measurement tag `{0}`")]
    DuplicateTag(String),
    #[error("unknown measurement tag `{0}`")]
    UnknownTag(String),
    #[error("operator must be Hermitian (phase +1 or -1), got phase i^{0}")]
    NonHermitian(u8),
    #[error("rotation angle must be finite")]
    NonFiniteAngle,
    #[error("probability {0} outside [0,1]")]
    BadProbability(f64),
    #[error("gate requires distinct qubits, got {0} twice")]
    RepeatedQubit(usize),
    #[error("noise site arity mismatch: kind wants {expected} qubits, got {got}")]
    NoiseArity { expected: usize, got: usize },
    #[error("empty outcome list")]
    EmptyProduct,
    #[error("outcome must be +1 or -1, got {0}")]
    BadOutcome(i8),
    #[error("record index {0} out of range ({1} outcomes)")]
    RecordOutOfRange(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}
