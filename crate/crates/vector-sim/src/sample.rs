//! Sampling executor: runs a full circuit (noise sites included) on the
//! dense state, drawing stochastic choices from a per-shot RNG.
//!
//! Draw alignment contract: every NoiseSite consumes a fixed number of
//! draws (2 per depolarizing site, 1 per flip site) and every measurement
//! or reset consumes exactly 1, whether or not anything triggers. Runs of
//! the same circuit therefore stay draw-aligned across different noise
//! rates, which is what makes common-random-number comparisons exact.

use crate::{StateVector, VectorError};
use floqsim_core::{Circuit, Instruction, MeasRecord, NoiseKind, Pauli, PauliString};
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

/// Execute one shot and return the tagged outcomes. Deterministic for a
/// fixed (circuit, seed) pair.
pub fn sample_record(circuit: &Circuit, seed: u64) -> Result<MeasRecord, VectorError> {
    let n = circuit.n_qubits();
    let mut sv = StateVector::zero(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut record = MeasRecord::with_capacity(circuit.measurement_count());
    let mut pending_flip = false;
    for instr in circuit.instructions() {
        match instr {
            Instruction::MeasurePauli { op, .. } => {
                let u: f64 = rng.gen();
                let p_plus = (1.0 + sv.expectation(op)?) / 2.0;
                let outcome: i8 = if u < p_plus { 1 } else { -1 };
                sv.collapse(op, outcome)?;
                record.push(if pending_flip { -outcome } else { outcome });
                pending_flip = false;
            }
            Instruction::ResetZ(q) => {
                let z = PauliString::single(n, *q, Pauli::Z).map_err(VectorError::Core)?;
                let u: f64 = rng.gen();
                let p_plus = (1.0 + sv.expectation(&z)?) / 2.0;
                let outcome: i8 = if u < p_plus { 1 } else { -1 };
                sv.collapse(&z, outcome)?;
                if outcome == -1 {
                    let x = PauliString::single(n, *q, Pauli::X).map_err(VectorError::Core)?;
                    sv.apply(&Instruction::PauliGate(x))?;
                }
            }
            Instruction::NoiseSite { kind, qubits } => match *kind {
                NoiseKind::Depolarize1 { p } => {
                    let trigger: f64 = rng.gen();
                    let which: f64 = rng.gen();
                    if trigger < p {
                        let letter = pauli_from_index((which * 3.0) as u64 % 3 + 1);
                        let op = PauliString::single(n, qubits[0], letter)
                            .map_err(VectorError::Core)?;
                        sv.apply(&Instruction::PauliGate(op))?;
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
                        let op = PauliString::from_ops(n, &ops).map_err(VectorError::Core)?;
                        sv.apply(&Instruction::PauliGate(op))?;
                    }
                }
                NoiseKind::FlipOutcome { p } => {
                    let u: f64 = rng.gen();
                    if u < p {
                        pending_flip = !pending_flip;
                    }
                }
            },
            other => sv.apply(other)?,
        }
    }
    Ok(record)
}
