//! Logical gates applied between stabilization rounds.
//!
//! Rotations act on the two-body operator representative that is current
//! after the round they follow: the support parity is accumulated onto a
//! fresh ancilla with CX gates, a one-qubit Rz applies the angle, and the
//! parity is uncomputed. The ancilla returns to its initial state exactly
//! and is never measured. X-axis rotations conjugate the same pattern with
//! Hadamards.
//!
//! The CNOT from the static qubit onto the dynamical qubit is a five-gate
//! data circuit valid after a B-type round (round index 2 mod 4), where the
//! dynamical representatives are X on {0,6} and Z on {6,7}. In the
//! hardware-shaped lowering the two non-adjacent entanglers are routed
//! through neighboring check ancillas with a four-CX bridge that acts as an
//! exact CNOT and leaves the ancilla (and its readout fold chain) intact.

use crate::geometry::{check, dynamical_op, static_op, RoundType};
use crate::lower::{Assembler, Lowering};
use crate::FbsError;
use floqsim_core::{Circuit, Pauli};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogicalGate {
    /// Pauli on the static qubit (frame-free, sign is global).
    PauliS(Pauli),
    /// Pauli on the dynamical qubit, via the current representative.
    PauliD(Pauli),
    RotZs(f64),
    RotXs(f64),
    RotZd(f64),
    RotXd(f64),
    /// CNOT, static control, dynamical target.
    CnotSD,
}

impl LogicalGate {
    pub fn name(&self) -> &'static str {
        match self {
            LogicalGate::PauliS(_) => "pauli_s",
            LogicalGate::PauliD(_) => "pauli_d",
            LogicalGate::RotZs(_) => "rot_zs",
            LogicalGate::RotXs(_) => "rot_xs",
            LogicalGate::RotZd(_) => "rot_zd",
            LogicalGate::RotXd(_) => "rot_xd",
            LogicalGate::CnotSD => "cnot_sd",
        }
    }

    /// One-shot ancillas the gate consumes.
    pub fn fresh_needed(&self) -> usize {
        match self {
            LogicalGate::RotZs(_)
            | LogicalGate::RotXs(_)
            | LogicalGate::RotZd(_)
            | LogicalGate::RotXd(_) => 1,
            _ => 0,
        }
    }

    /// Required round index mod 4 for placement, if constrained.
    pub fn required_phase(&self) -> Option<usize> {
        match self {
            LogicalGate::CnotSD => Some(2),
            _ => None,
        }
    }

    /// Emit the physical circuit after a round of type `t`.
    pub fn emit(&self, asm: &mut Assembler, t: RoundType) -> Result<(), FbsError> {
        let n = asm.n_qubits();
        match *self {
            LogicalGate::PauliS(p) => {
                if p != Pauli::I {
                    asm.circuit_mut().pauli_gate(static_op(n, p))?;
                }
            }
            LogicalGate::PauliD(p) => {
                if p != Pauli::I {
                    asm.circuit_mut().pauli_gate(dynamical_op(n, p, t))?;
                }
            }
            LogicalGate::RotZs(theta) => {
                let support: Vec<usize> = static_op(n, Pauli::Z).support().collect();
                parity_rz(asm, &support, theta, false)?;
            }
            LogicalGate::RotXs(theta) => {
                let support: Vec<usize> = static_op(n, Pauli::X).support().collect();
                parity_rz(asm, &support, theta, true)?;
            }
            LogicalGate::RotZd(theta) => {
                let support: Vec<usize> = dynamical_op(n, Pauli::Z, t).support().collect();
                parity_rz(asm, &support, theta, false)?;
            }
            LogicalGate::RotXd(theta) => {
                let support: Vec<usize> = dynamical_op(n, Pauli::X, t).support().collect();
                parity_rz(asm, &support, theta, true)?;
            }
            LogicalGate::CnotSD => {
                debug_assert_eq!(t, RoundType::B, "CNOT placement is validated upstream");
                let lowering = asm.lowering();
                let c = asm.circuit_mut();
                match lowering {
                    Lowering::Direct => {
                        c.cx(3, 0)?;
                        c.cx(3, 6)?;
                    }
                    Lowering::Ancilla => {
                        bridge_cx(c, 3, 0, check("x14").ancilla())?;
                        bridge_cx(c, 3, 6, check("x47").ancilla())?;
                    }
                }
                // swap the dynamical X anchor back onto qubit 0
                c.cx(0, 6)?;
                c.cx(6, 0)?;
                c.cx(0, 6)?;
            }
        }
        Ok(())
    }
}

/// exp(-i theta/2 * P) for P the Z (or, with `x_basis`, X) product over
/// `support`, via parity accumulation on a fresh ancilla.
fn parity_rz(
    asm: &mut Assembler,
    support: &[usize],
    theta: f64,
    x_basis: bool,
) -> Result<(), FbsError> {
    let a = asm.alloc_fresh()?;
    let c = asm.circuit_mut();
    if x_basis {
        for &q in support {
            c.h(q)?;
        }
    }
    for &q in support {
        c.cx(q, a)?;
    }
    c.rz(a, theta)?;
    for &q in support.iter().rev() {
        c.cx(q, a)?;
    }
    if x_basis {
        for &q in support {
            c.h(q)?;
        }
    }
    Ok(())
}

/// CNOT control -> target routed through a bridge qubit: acts as the plain
/// CNOT and restores the bridge exactly, whatever its state.
fn bridge_cx(c: &mut Circuit, control: usize, target: usize, bridge: usize) -> Result<(), FbsError> {
    c.cx(control, bridge)?;
    c.cx(bridge, target)?;
    c.cx(control, bridge)?;
    c.cx(bridge, target)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use floqsim_core::{Instruction, PauliString};
    use floqsim_vector::StateVector;

    fn same_up_to_phase(a: &StateVector, b: &StateVector) -> bool {
        let overlap: num_complex::Complex64 = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| x.conj() * y)
            .sum();
        (overlap.norm() - 1.0).abs() < 1e-10
    }

    #[test]
    fn bridge_is_an_exact_cnot_for_any_bridge_state() {
        // bridge qubit 2, control 0, target 1; try bridge in Z, X and Y
        // eigenstates with the control in superposition
        let preps: Vec<Vec<Instruction>> = vec![
            vec![],
            vec![Instruction::H(2)],
            vec![Instruction::H(2), Instruction::S(2)],
            vec![Instruction::PauliGate(PauliString::x_on(3, &[2]).unwrap())],
        ];
        for prep in preps {
            let mut start = StateVector::zero(3).unwrap();
            start.apply(&Instruction::H(0)).unwrap();
            start.apply(&Instruction::S(0)).unwrap();
            for ins in &prep {
                start.apply(ins).unwrap();
            }
            let mut bridged = start.clone();
            let mut circ = Circuit::new(3);
            bridge_cx(&mut circ, 0, 1, 2).unwrap();
            for ins in circ.instructions() {
                bridged.apply(ins).unwrap();
            }
            let mut plain = start;
            plain
                .apply(&Instruction::Cx { control: 0, target: 1 })
                .unwrap();
            assert!(bridged
                .amplitudes()
                .iter()
                .zip(plain.amplitudes())
                .all(|(x, y)| (x - y).norm() < 1e-10));
        }
    }

    #[test]
    fn parity_rotation_at_pi_is_the_pauli_product() {
        // exp(-i pi/2 ZZ) = -i Z x Z: states match up to the global phase
        let mut asm = Assembler::new(Lowering::Direct, 1);
        LogicalGate::RotZd(std::f64::consts::PI)
            .emit(&mut asm, RoundType::B)
            .unwrap();
        let circ = asm.into_circuit();
        let n = circ.n_qubits();
        let mut rotated = StateVector::zero(n).unwrap();
        // put the support {6,7} into a state with coherences
        for q in [6, 7] {
            rotated.apply(&Instruction::H(q)).unwrap();
        }
        let mut flipped = rotated.clone();
        for ins in circ.instructions() {
            rotated.apply(ins).unwrap();
        }
        flipped
            .apply(&Instruction::PauliGate(PauliString::z_on(n, &[6, 7]).unwrap()))
            .unwrap();
        assert!(same_up_to_phase(&rotated, &flipped));
    }

    #[test]
    fn rotation_ancilla_is_returned_to_zero() {
        let mut asm = Assembler::new(Lowering::Ancilla, 1);
        LogicalGate::RotXd(0.7).emit(&mut asm, RoundType::C).unwrap();
        let circ = asm.into_circuit();
        let n = circ.n_qubits();
        let mut v = StateVector::zero(n).unwrap();
        v.apply(&Instruction::H(3)).unwrap();
        v.apply(&Instruction::H(6)).unwrap();
        for ins in circ.instructions() {
            v.apply(ins).unwrap();
        }
        let anc_z = PauliString::z_on(n, &[n - 1]).unwrap();
        assert!((v.expectation(&anc_z).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pauli_gates_use_current_representatives() {
        let mut asm = Assembler::new(Lowering::Direct, 0);
        LogicalGate::PauliD(Pauli::X).emit(&mut asm, RoundType::A).unwrap();
        let text = asm.circuit().to_text();
        assert!(text.contains("XIIXIIIII"), "{text}");
    }
}
