//! Circuit assembly for the two lowering modes.
//!
//! `Direct` measures multi-qubit Pauli operators as single IR instructions
//! on the data qubits. `Ancilla` is the hardware-shaped form: every
//! measurement is mediated by an ancilla through a prep-H block, one CZ
//! entangler block per operator (with single-qubit basis wrappers on the
//! data side), a closing H block, a dynamical-decoupling idle on the data
//! qubits, and Z readouts of the ancillas.
//!
//! Ancillas are never reset. A readout therefore reports the product of the
//! measured operator with the ancilla's previous readout, and the folded
//! value of a measurement is its outcome times the previous outcome on the
//! same ancilla. The assembler records that chain so post-processing can
//! fold outcomes back into operator values.

use crate::frame::DerivedValue;
use crate::geometry::{Check, FIRST_FRESH, N_DATA};
use crate::FbsError;
use floqsim_core::{Circuit, Pauli, PauliString};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lowering {
    Direct,
    Ancilla,
}

/// How a grouped measurement is mediated in ancilla mode.
#[derive(Debug, Clone, Copy)]
pub enum Mediator {
    /// The dedicated ancilla of a two-body check.
    Check(&'static Check),
    /// A one-shot helper ancilla.
    Fresh,
}

/// One operator to measure within a group.
#[derive(Debug, Clone)]
pub struct GroupItem {
    pub op: PauliString,
    pub tag: String,
    pub mediator: Mediator,
}

impl GroupItem {
    pub fn check(c: &'static Check, n: usize, tag: String) -> GroupItem {
        GroupItem { op: c.op(n), tag, mediator: Mediator::Check(c) }
    }
}

pub struct Assembler {
    circuit: Circuit,
    lowering: Lowering,
    fold_prev: Vec<Option<usize>>,
    last_on_ancilla: HashMap<usize, usize>,
    next_fresh: usize,
    fresh_limit: usize,
}

impl Assembler {
    /// `fresh` is the number of one-shot ancillas the plan will need
    /// (helper measurements plus rotation parity ancillas).
    pub fn new(lowering: Lowering, fresh: usize) -> Assembler {
        let (base, n) = match lowering {
            Lowering::Direct => (N_DATA, N_DATA + fresh),
            Lowering::Ancilla => (FIRST_FRESH, FIRST_FRESH + fresh),
        };
        Assembler {
            circuit: Circuit::new(n),
            lowering,
            fold_prev: Vec::new(),
            last_on_ancilla: HashMap::new(),
            next_fresh: base,
            fresh_limit: n,
        }
    }

    pub fn lowering(&self) -> Lowering {
        self.lowering
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    pub fn circuit_mut(&mut self) -> &mut Circuit {
        &mut self.circuit
    }

    pub fn alloc_fresh(&mut self) -> Result<usize, FbsError> {
        if self.next_fresh >= self.fresh_limit {
            return Err(FbsError::FreshAncillasExhausted);
        }
        let q = self.next_fresh;
        self.next_fresh += 1;
        Ok(q)
    }

    fn push_measure(
        &mut self,
        op: PauliString,
        tag: &str,
        ancilla: Option<usize>,
    ) -> Result<(), FbsError> {
        let ordinal = self.circuit.measurement_count();
        let prev = ancilla.and_then(|a| self.last_on_ancilla.get(&a).copied());
        self.circuit.measure(op, tag)?;
        self.fold_prev.push(prev);
        if let Some(a) = ancilla {
            self.last_on_ancilla.insert(a, ordinal);
        }
        Ok(())
    }

    /// Basis wrapper that maps the letter at `q` onto the CZ-coupled Z axis.
    fn basis_pre(&mut self, q: usize, letter: Pauli) -> Result<(), FbsError> {
        match letter {
            Pauli::X => self.circuit.h(q)?,
            Pauli::Y => {
                self.circuit.sdg(q)?;
                self.circuit.h(q)?;
            }
            Pauli::Z => {}
            Pauli::I => unreachable!("identity site in measured operator"),
        };
        Ok(())
    }

    fn basis_post(&mut self, q: usize, letter: Pauli) -> Result<(), FbsError> {
        match letter {
            Pauli::X => self.circuit.h(q)?,
            Pauli::Y => {
                self.circuit.h(q)?;
                self.circuit.s(q)?;
            }
            Pauli::Z => {}
            Pauli::I => unreachable!(),
        };
        Ok(())
    }

    /// Measure a group of commuting operators as one time step: entangle
    /// all mediators, then one shared data idle, then all readouts.
    pub fn measure_group(&mut self, items: &[GroupItem]) -> Result<(), FbsError> {
        for item in items {
            debug_assert_eq!(item.op.sign(), Ok(1), "measured ops are phase-free");
        }
        match self.lowering {
            Lowering::Direct => {
                self.circuit.idle_dd((0..N_DATA).collect())?;
                for item in items {
                    self.push_measure(item.op.clone(), &item.tag, None)?;
                }
            }
            Lowering::Ancilla => {
                let n = self.n_qubits();
                let mut resolved = Vec::with_capacity(items.len());
                for item in items {
                    let a = match item.mediator {
                        Mediator::Check(c) => c.ancilla(),
                        Mediator::Fresh => self.alloc_fresh()?,
                    };
                    resolved.push(a);
                }
                for &a in &resolved {
                    self.circuit.h(a)?;
                }
                for (item, &a) in items.iter().zip(&resolved) {
                    for q in item.op.support() {
                        let letter = item.op.letter_at(q);
                        self.basis_pre(q, letter)?;
                        self.circuit.cz(a, q)?;
                        self.basis_post(q, letter)?;
                    }
                }
                for &a in &resolved {
                    self.circuit.h(a)?;
                }
                self.circuit.idle_dd((0..N_DATA).collect())?;
                for (item, &a) in items.iter().zip(&resolved) {
                    let readout = PauliString::z_on(n, &[a]).map_err(FbsError::Core)?;
                    self.push_measure(readout, &item.tag, Some(a))?;
                }
            }
        }
        Ok(())
    }

    /// Transversal readout of all data qubits in the given onsite bases.
    pub fn data_measurement(&mut self, basis: &[Pauli; N_DATA]) -> Result<(), FbsError> {
        let n = self.n_qubits();
        for (q, &b) in basis.iter().enumerate() {
            debug_assert!(b != Pauli::I);
            self.basis_pre(q, b)?;
        }
        for q in 0..N_DATA {
            let readout = PauliString::z_on(n, &[q]).map_err(FbsError::Core)?;
            self.push_measure(readout, &format!("data:q{q}"), None)?;
        }
        Ok(())
    }

    /// Ordinal of a tagged measurement.
    pub fn ordinal(&self, tag: &str) -> Result<usize, FbsError> {
        Ok(self.circuit.tag_ordinal(tag)?)
    }

    /// Folded operator value for a tagged measurement: the outcome times
    /// the previous outcome on the same ancilla, if any.
    pub fn folded(&self, tag: &str) -> Result<DerivedValue, FbsError> {
        let ord = self.ordinal(tag)?;
        let mut v = DerivedValue::from_ordinal(ord);
        if let Some(prev) = self.fold_prev[ord] {
            v = v.mul(&DerivedValue::from_ordinal(prev));
        }
        Ok(v)
    }

    pub fn fold_prev(&self) -> &[Option<usize>] {
        &self.fold_prev
    }

    pub fn into_circuit(self) -> Circuit {
        self.circuit
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::check;

    fn z_group(a: &mut Assembler, round: usize, names: [&str; 2]) {
        let n = a.n_qubits();
        let items: Vec<GroupItem> = names
            .iter()
            .map(|nm| GroupItem::check(check(nm), n, format!("r{round}:{nm}")))
            .collect();
        a.measure_group(&items).unwrap();
    }

    #[test]
    fn fold_chains_follow_ancilla_reuse() {
        let mut a = Assembler::new(Lowering::Ancilla, 0);
        z_group(&mut a, 1, ["z12", "z45"]);
        z_group(&mut a, 2, ["z12", "z78"]);
        // first uses fold to themselves only
        assert_eq!(a.folded("r1:z12").unwrap().mask.ordinals(), vec![0]);
        assert_eq!(a.folded("r1:z45").unwrap().mask.ordinals(), vec![1]);
        // reuse folds one back on the same ancilla
        assert_eq!(a.folded("r2:z12").unwrap().mask.ordinals(), vec![0, 2]);
        assert_eq!(a.folded("r2:z78").unwrap().mask.ordinals(), vec![3]);
    }

    #[test]
    fn direct_mode_measures_bare_operators() {
        let mut a = Assembler::new(Lowering::Direct, 0);
        z_group(&mut a, 1, ["z12", "z45"]);
        assert_eq!(a.n_qubits(), N_DATA);
        assert_eq!(a.folded("r1:z12").unwrap().mask.ordinals(), vec![0]);
        let c = a.into_circuit();
        assert_eq!(c.measurement_count(), 2);
    }

    #[test]
    fn ancilla_block_shape() {
        let mut a = Assembler::new(Lowering::Ancilla, 0);
        let n = a.n_qubits();
        let items = vec![
            GroupItem::check(check("x47"), n, "r1:x47".into()),
            GroupItem::check(check("x58"), n, "r1:x58".into()),
        ];
        a.measure_group(&items).unwrap();
        let text = a.circuit().to_text();
        // two ancilla preps, H-wrapped CZs on data, two readouts
        assert_eq!(text.matches("CZ").count(), 4);
        assert_eq!(text.matches("IDLE").count(), 1);
        // X sites get an H before and after each CZ: 8 data H plus 4 ancilla H
        assert_eq!(text.matches('H').count(), 12);
    }

    #[test]
    fn fresh_ancillas_are_bounded() {
        let mut a = Assembler::new(Lowering::Ancilla, 1);
        assert_eq!(a.alloc_fresh().unwrap(), FIRST_FRESH);
        assert!(matches!(a.alloc_fresh(), Err(FbsError::FreshAncillasExhausted)));
        let mut d = Assembler::new(Lowering::Direct, 2);
        assert_eq!(d.alloc_fresh().unwrap(), N_DATA);
        assert_eq!(d.alloc_fresh().unwrap(), N_DATA + 1);
    }

    #[test]
    fn y_basis_wrapper_shape() {
        let mut a = Assembler::new(Lowering::Ancilla, 1);
        let n = a.n_qubits();
        let op = PauliString::from_ops(n, &[(2, Pauli::X), (7, Pauli::Z), (8, Pauli::Y)]).unwrap();
        let items = vec![GroupItem { op, tag: "enc0:yd".into(), mediator: Mediator::Fresh }];
        a.measure_group(&items).unwrap();
        let text = a.circuit().to_text();
        assert_eq!(text.matches("CZ").count(), 3);
        assert_eq!(text.matches("SDG").count(), 1);
        // the closing S restores the Y-basis qubit
        assert!(text.contains("S 8"));
    }

    #[test]
    fn data_measurement_emits_nine_tagged_readouts() {
        let mut a = Assembler::new(Lowering::Direct, 0);
        let basis = [
            Pauli::Z, Pauli::Z, Pauli::X,
            Pauli::X, Pauli::Y, Pauli::X,
            Pauli::Z, Pauli::Z, Pauli::Y,
        ];
        a.data_measurement(&basis).unwrap();
        for q in 0..N_DATA {
            assert_eq!(a.ordinal(&format!("data:q{q}")).unwrap(), q);
        }
    }
}
