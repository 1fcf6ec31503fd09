//! Shot executor for the tableau backend.
//!
//! Keeps the same draw alignment contract as the dense sampler: every
//! measurement or reset consumes exactly one uniform draw (used only when
//! the outcome is actually random), every depolarizing site two, every flip
//! site one. With matching seeds the two backends therefore walk the same
//! random stream, and noiseless Clifford shots agree outcome for outcome.

use crate::{Tableau, TableauError};
use floqsim_core::{Circuit, Instruction, MeasRecord, NoiseKind, Pauli, PauliString};
use floqsim_noise::{instrument, NoiseModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pauli_from_index(k: u64) -> Pauli {
    match k & 3 {
        0 => Pauli::I,
        1 => Pauli::X,
        2 => Pauli::Y,
        _ => Pauli::Z,
    }
}

/// Execute one shot of an already instrumented (or noiseless) circuit.
pub fn execute_record(circuit: &Circuit, seed: u64) -> Result<MeasRecord, TableauError> {
    let n = circuit.n_qubits();
    let mut tab = Tableau::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut record = MeasRecord::with_capacity(circuit.measurement_count());
    let mut pending_flip = false;
    for instr in circuit.instructions() {
        match instr {
            Instruction::MeasurePauli { op, .. } => {
                let u: f64 = rng.gen();
                let (outcome, _) = tab.measure_pauli(op, u < 0.5)?;
                record.push(if pending_flip { -outcome } else { outcome });
                pending_flip = false;
            }
            Instruction::ResetZ(q) => {
                let z = PauliString::single(n, *q, Pauli::Z).map_err(TableauError::Core)?;
                let u: f64 = rng.gen();
                let (outcome, _) = tab.measure_pauli(&z, u < 0.5)?;
                if outcome == -1 {
                    let x = PauliString::single(n, *q, Pauli::X).map_err(TableauError::Core)?;
                    tab.pauli_gate(&x)?;
                }
            }
            Instruction::NoiseSite { kind, qubits } => match *kind {
                NoiseKind::Depolarize1 { p } => {
                    let trigger: f64 = rng.gen();
                    let which: f64 = rng.gen();
                    if trigger < p {
                        let letter = pauli_from_index((which * 3.0) as u64 % 3 + 1);
                        let op = PauliString::single(n, qubits[0], letter)
                            .map_err(TableauError::Core)?;
                        tab.pauli_gate(&op)?;
                    }
                }
                NoiseKind::Depolarize2 { p } => {
                    let trigger: f64 = rng.gen();
                    let which: f64 = rng.gen();
                    if trigger < p {
                        let idx = (which * 15.0) as u64 % 15 + 1;
                        let mut ops = Vec::new();
                        let a = pauli_from_index(idx & 3);
                        let b = pauli_from_index(idx >> 2);
                        if a != Pauli::I {
                            ops.push((qubits[0], a));
                        }
                        if b != Pauli::I {
                            ops.push((qubits[1], b));
                        }
                        let op = PauliString::from_ops(n, &ops).map_err(TableauError::Core)?;
                        tab.pauli_gate(&op)?;
                    }
                }
                NoiseKind::FlipOutcome { p } => {
                    let u: f64 = rng.gen();
                    if u < p {
                        pending_flip = !pending_flip;
                    }
                }
            },
            other => tab.apply(other)?,
        }
    }
    Ok(record)
}

/// Instrument a clean circuit with the given noise model, then execute one
/// shot. Hot loops should instrument once and call `execute_record` instead.
pub fn run_shot(
    circuit: &Circuit,
    model: &NoiseModel,
    seed: u64,
) -> Result<MeasRecord, TableauError> {
    let noisy = instrument(circuit, model)?;
    execute_record(&noisy, seed)
}
