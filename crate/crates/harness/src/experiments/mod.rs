//! The nine experiments, one module per family, plus shared plumbing.

mod bs;
mod budget;
mod memory;
mod rotation;
mod tomography;

use crate::config::{ExperimentKind, RunConfig};
use crate::result::ResultDoc;
use crate::runner::{run_fbs_shots, SeriesStats};
use crate::HarnessError;
use floqsim_core::{derive_shot_seed, Pauli};
use floqsim_fbs::gates::LogicalGate;
use floqsim_fbs::plan::{ExperimentPlan, PlanSpec, StateSpec};
use floqsim_tomo::{basis_label, BasisCounts, DensityMatrix, BASIS_AXES};
use nalgebra::{Matrix4, Vector2, Vector4};
use num_complex::Complex64;
use std::collections::BTreeMap;

pub fn run(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    match cfg.experiment {
        ExperimentKind::EncodeFidelity => tomography::encode_fidelity(cfg),
        ExperimentKind::FbsMemory => memory::fbs_memory(cfg),
        ExperimentKind::PauliGates => memory::pauli_gates(cfg),
        ExperimentKind::RotationSweep => rotation::rotation_sweep(cfg),
        ExperimentKind::CnotBell => tomography::cnot_bell(cfg),
        ExperimentKind::LqptCnot => tomography::lqpt_cnot(cfg),
        ExperimentKind::BsMemory => bs::bs_memory(cfg),
        ExperimentKind::BsGates => bs::bs_gates(cfg),
        ExperimentKind::ErrorBudget => budget::error_budget_experiment(cfg),
    }
}

pub(crate) fn state_of(label: &str) -> Result<StateSpec, HarnessError> {
    StateSpec::from_label(label).map_err(|e| HarnessError::Config(e.to_string()))
}

/// Final measurement axes: the config's `setting` override, or the state's
/// own eigenbasis.
pub(crate) fn setting_axes(
    cfg: &RunConfig,
    state: &StateSpec,
) -> Result<(Pauli, Pauli), HarnessError> {
    match &cfg.setting {
        Some(s) => crate::config::parse_setting(s),
        None => Ok((state.s_axis, state.d_axis)),
    }
}

/// Evenly split a total shot budget over `parts` runs, at least one shot
/// each.
pub(crate) fn split_shots(total: u64, parts: usize) -> u64 {
    (total / parts.max(1) as u64).max(1)
}

/// Seed of an experiment-internal sampling stream.
pub(crate) fn stream_seed(cfg: &RunConfig, index: u64) -> u64 {
    derive_shot_seed(cfg.seed, index)
}

pub(crate) fn pauli_of_index(i: usize) -> Pauli {
    match i {
        1 => Pauli::X,
        2 => Pauli::Y,
        3 => Pauli::Z,
        _ => unreachable!("basis axes are 1..=3"),
    }
}

pub(crate) fn anticommutes(a: Pauli, b: Pauli) -> bool {
    a != Pauli::I && b != Pauli::I && a != b
}

/// Single-qubit eigenstate ket of `sign * axis`.
pub(crate) fn single_ket(axis: Pauli, sign: i8) -> Vector2<Complex64> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let zero = Complex64::new(0.0, 0.0);
    match (axis, sign > 0) {
        (Pauli::Z, true) => Vector2::new(one, zero),
        (Pauli::Z, false) => Vector2::new(zero, one),
        (Pauli::X, true) => Vector2::new(h, h),
        (Pauli::X, false) => Vector2::new(h, -h),
        (Pauli::Y, true) => Vector2::new(h, i * h),
        (Pauli::Y, false) => Vector2::new(h, -i * h),
        (Pauli::I, _) => unreachable!("identity axis rejected earlier"),
    }
}

/// Two-qubit product ket, static factor first.
pub(crate) fn pair_ket(state: &StateSpec) -> Vector4<Complex64> {
    let s = single_ket(state.s_axis, state.s_sign);
    let d = single_ket(state.d_axis, state.d_sign);
    Vector4::new(s[0] * d[0], s[0] * d[1], s[1] * d[0], s[1] * d[1])
}

pub(crate) fn ideal_pair_rho(state: &StateSpec) -> Result<DensityMatrix, HarnessError> {
    Ok(DensityMatrix::pure(&pair_ket(state))?)
}

/// The logical CNOT (static control, dynamical target) on the
/// computational basis |s d>.
pub(crate) fn logical_cnot_matrix() -> Matrix4<Complex64> {
    let mut u = Matrix4::zeros();
    let one = Complex64::new(1.0, 0.0);
    u[(0, 0)] = one;
    u[(1, 1)] = one;
    u[(2, 3)] = one;
    u[(3, 2)] = one;
    u
}

/// One full nine-basis tomography scan of a state under the given gates.
pub(crate) struct LqstData {
    pub counts_raw: BasisCounts,
    pub counts_det: BasisCounts,
    /// Mean retained fraction over the nine settings.
    pub retention: f64,
    pub stats: BTreeMap<String, SeriesStats>,
}

pub(crate) fn lqst_scan(
    cfg: &RunConfig,
    state: StateSpec,
    gates: &[(usize, LogicalGate)],
    rounds: usize,
    shots_per_basis: u64,
    stream_base: u64,
) -> Result<LqstData, HarnessError> {
    let mut counts_raw = BasisCounts::new();
    let mut counts_det = BasisCounts::new();
    let mut stats = BTreeMap::new();
    let mut retention = 0.0;
    let mut k = 0u64;
    for &a in &BASIS_AXES {
        for &b in &BASIS_AXES {
            let key = basis_label(a, b);
            let spec = PlanSpec {
                state,
                rounds,
                gates: gates.to_vec(),
                setting: (pauli_of_index(a), pauli_of_index(b)),
                lowering: cfg.lowering.to_fbs(),
            };
            let plan = ExperimentPlan::build(spec)?;
            let batch = run_fbs_shots(
                &plan,
                &cfg.noise,
                cfg.backend,
                shots_per_basis,
                derive_shot_seed(stream_base, k),
            )?;
            counts_raw.insert(key.clone(), batch.hist_raw);
            counts_det.insert(key.clone(), batch.hist_detected);
            retention += batch.stats.retention / 9.0;
            stats.insert(key, batch.stats);
            k += 1;
        }
    }
    Ok(LqstData {
        counts_raw,
        counts_det,
        retention,
        stats,
    })
}
