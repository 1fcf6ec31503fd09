//! The four-component noise model and the instrumentation pass.

use crate::NoiseError;
use floqsim_core::{Circuit, Instruction, NoiseKind};
use serde::{Deserialize, Serialize};

/// Circuit-level Pauli noise rates. Defaults are the experiment's median
/// component error rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    /// Depolarizing probability after each single-qubit gate.
    pub p_1q: f64,
    /// Two-qubit depolarizing probability after each CZ/CNOT.
    pub p_cz: f64,
    /// Classical flip probability per measurement readout.
    pub p_m: f64,
    /// Depolarizing probability per data qubit per readout idle window.
    pub p_dd: f64,
}

impl Default for NoiseModel {
    fn default() -> NoiseModel {
        NoiseModel {
            p_1q: 0.0007,
            p_cz: 0.0097,
            p_m: 0.0158,
            p_dd: 0.0143,
        }
    }
}

impl NoiseModel {
    /// All-zero rates: instrumentation keeps site positions but nothing
    /// ever triggers.
    pub fn zero() -> NoiseModel {
        NoiseModel {
            p_1q: 0.0,
            p_cz: 0.0,
            p_m: 0.0,
            p_dd: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, value) in [
            ("p_1q", self.p_1q),
            ("p_cz", self.p_cz),
            ("p_m", self.p_m),
            ("p_dd", self.p_dd),
        ] {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(NoiseError::BadRate { name, value });
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.p_1q == 0.0 && self.p_cz == 0.0 && self.p_m == 0.0 && self.p_dd == 0.0
    }
}

/// Attach noise sites to a bare circuit:
/// every single-qubit gate is followed by depolarizing(p_1q) on its qubit
/// (one site per support qubit for a PauliGate), every CZ/CNOT by
/// two-qubit depolarizing(p_cz), every measurement is preceded by a
/// classical flip(p_m), and every IdleDd window is replaced by
/// depolarizing(p_dd) on the idling qubits.
///
/// Sites are emitted even at rate zero so that circuits instrumented with
/// different models of the same shape stay draw-aligned under a common
/// seed (the executors consume a fixed number of draws per site).
pub fn instrument(circuit: &Circuit, model: &NoiseModel) -> Result<Circuit, NoiseError> {
    model.validate()?;
    let mut out = Circuit::new(circuit.n_qubits());
    let depol1 = |q: usize| Instruction::NoiseSite {
        kind: NoiseKind::Depolarize1 { p: model.p_1q },
        qubits: vec![q],
    };
    for instr in circuit.instructions() {
        match instr {
            Instruction::NoiseSite { .. } => return Err(NoiseError::AlreadyInstrumented),
            Instruction::IdleDd { qubits } => {
                for &q in qubits {
                    out.push(Instruction::NoiseSite {
                        kind: NoiseKind::Depolarize1 { p: model.p_dd },
                        qubits: vec![q],
                    })?;
                }
            }
            Instruction::MeasurePauli { .. } => {
                out.push(Instruction::NoiseSite {
                    kind: NoiseKind::FlipOutcome { p: model.p_m },
                    qubits: vec![],
                })?;
                out.push(instr.clone())?;
            }
            Instruction::H(q)
            | Instruction::S(q)
            | Instruction::Sdg(q)
            | Instruction::Rx { q, .. }
            | Instruction::Ry { q, .. }
            | Instruction::Rz { q, .. } => {
                out.push(instr.clone())?;
                out.push(depol1(*q))?;
            }
            Instruction::PauliGate(op) => {
                out.push(instr.clone())?;
                for q in op.support() {
                    out.push(depol1(q))?;
                }
            }
            Instruction::Cx {
                control: a,
                target: b,
            }
            | Instruction::Cz { a, b } => {
                out.push(instr.clone())?;
                out.push(Instruction::NoiseSite {
                    kind: NoiseKind::Depolarize2 { p: model.p_cz },
                    qubits: vec![*a, *b],
                })?;
            }
            Instruction::ResetZ(_) => out.push(instr.clone())?,
        }
    }
    Ok(out)
}

/// Baseline physical error probability of an idling qubit over duration
/// `tau`: 1 - exp(-tau/t2e)/2 - exp(-tau/t1)/2. Durations share any one
/// unit.
pub fn physical_baseline(tau: f64, t1: f64, t2e: f64) -> Result<f64, NoiseError> {
    for (name, value) in [("tau", tau), ("t1", t1), ("t2e", t2e)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(NoiseError::BadDuration { name, value });
        }
    }
    Ok(1.0 - 0.5 * (-tau / t2e).exp() - 0.5 * (-tau / t1).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use floqsim_core::PauliString;

    fn bare_circuit() -> Circuit {
        let mut c = Circuit::new(3);
        c.h(0).unwrap();
        c.cx(0, 1).unwrap();
        c.pauli_gate(PauliString::x_on(3, &[1, 2]).unwrap()).unwrap();
        c.idle_dd(vec![0, 2]).unwrap();
        c.measure(PauliString::z_on(3, &[0, 1]).unwrap(), "m").unwrap();
        c
    }

    #[test]
    fn defaults_are_the_monitored_medians() {
        let m = NoiseModel::default();
        assert_eq!(
            (m.p_1q, m.p_cz, m.p_m, m.p_dd),
            (0.0007, 0.0097, 0.0158, 0.0143)
        );
        m.validate().unwrap();
        assert!(NoiseModel::zero().is_zero());
    }

    #[test]
    fn validation_rejects_bad_rates() {
        let mut m = NoiseModel::default();
        m.p_m = 1.2;
        assert!(m.validate().is_err());
        m.p_m = f64::NAN;
        assert!(m.validate().is_err());
    }

    #[test]
    fn placement_rules() {
        let c = bare_circuit();
        let inst = instrument(&c, &NoiseModel::default()).unwrap();
        let kinds: Vec<String> = inst
            .instructions()
            .iter()
            .map(|i| match i {
                Instruction::H(_) => "H".into(),
                Instruction::Cx { .. } => "CX".into(),
                Instruction::PauliGate(_) => "P".into(),
                Instruction::MeasurePauli { .. } => "M".into(),
                Instruction::NoiseSite { kind, qubits } => match kind {
                    NoiseKind::Depolarize1 { .. } => format!("d1({})", qubits[0]),
                    NoiseKind::Depolarize2 { .. } => "d2".into(),
                    NoiseKind::FlipOutcome { .. } => "flip".into(),
                },
                _ => "?".into(),
            })
            .collect();
        assert_eq!(
            kinds,
            [
                "H", "d1(0)", "CX", "d2", "P", "d1(1)", "d1(2)", "d1(0)", "d1(2)", "flip", "M"
            ]
        );
        // The idle window sites carry p_dd, not p_1q.
        let idle_site = &inst.instructions()[7];
        match idle_site {
            Instruction::NoiseSite {
                kind: NoiseKind::Depolarize1 { p },
                ..
            } => assert_eq!(*p, 0.0143),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_model_changes_nothing_semantically() {
        let c = bare_circuit();
        let inst = instrument(&c, &NoiseModel::zero()).unwrap();
        let stripped: Vec<_> = inst
            .instructions()
            .iter()
            .filter(|i| !matches!(i, Instruction::NoiseSite { .. }))
            .cloned()
            .collect();
        let original: Vec<_> = c
            .instructions()
            .iter()
            .filter(|i| !matches!(i, Instruction::IdleDd { .. }))
            .cloned()
            .collect();
        assert_eq!(stripped, original);
        for i in inst.instructions() {
            if let Instruction::NoiseSite { kind, .. } = i {
                assert_eq!(kind.probability(), 0.0);
            }
        }
    }

    #[test]
    fn double_instrumentation_is_rejected() {
        let c = bare_circuit();
        let once = instrument(&c, &NoiseModel::default()).unwrap();
        assert!(matches!(
            instrument(&once, &NoiseModel::default()),
            Err(NoiseError::AlreadyInstrumented)
        ));
    }

    #[test]
    fn baseline_formula() {
        let eps = physical_baseline(920e-9, 77.1e-6, 11.7e-6).unwrap();
        assert!((eps - 0.044).abs() < 0.001, "eps {eps}");
        let tiny = physical_baseline(1e-15, 77.1e-6, 11.7e-6).unwrap();
        assert!(tiny.abs() < 1e-9);
        let equal = physical_baseline(5.0, 5.0, 5.0).unwrap();
        assert!((equal - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!(physical_baseline(0.0, 1.0, 1.0).is_err());
        assert!(physical_baseline(1.0, -1.0, 1.0).is_err());
    }
}
