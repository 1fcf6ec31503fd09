//! Static Bacon-Shor mode on the same 3x3 array.
//!
//! The comparison baseline for the Floquet experiments: every round
//! measures all six X checks and then all six Z checks, so all four
//! stabilizers refresh every round and no measurement frame is needed.
//! The price is weight-6 stabilizer products per detector; the payoff is
//! that the two repetition-code detector graphs (row walls against phase
//! errors, column walls against bit errors) support full error
//! correction by minimum-weight matching, not just post-selection.
//!
//! Logical gates are transversal Pauli layers plus a Y(pi/2) built from a
//! physical Z layer, a physical Hadamard layer, and a virtual transpose
//! of the data grid. The transpose is pure bookkeeping: a frame tracks
//! which physical qubit currently plays each grid role, check operators
//! follow the frame, and stored stabilizer values swap labels
//! (A with B, C with D) so detectors stay quiet across the gate.

use crate::decode::{decode, Defect};
use crate::encode::{prep_instruction, row_ghz, static_y_prep, PrepOp};
use crate::frame::{DerivedValue, OutcomeBits, MAX_MEAS};
use crate::geometry::{static_op, StabId, CHECKS, N_DATA};
use crate::lower::{Assembler, GroupItem, Lowering, Mediator};
use crate::FbsError;
use floqsim_core::{Circuit, CoreError, MeasRecord, Pauli, PauliString};
use floqsim_tableau::Tableau;

/// The six logical preparations of the static mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsState {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl BsState {
    pub const ALL: [BsState; 6] = [
        BsState::Zero,
        BsState::One,
        BsState::Plus,
        BsState::Minus,
        BsState::PlusI,
        BsState::MinusI,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BsState::Zero => "0",
            BsState::One => "1",
            BsState::Plus => "+",
            BsState::Minus => "-",
            BsState::PlusI => "+i",
            BsState::MinusI => "-i",
        }
    }

    pub fn from_label(label: &str) -> Result<BsState, FbsError> {
        BsState::ALL
            .into_iter()
            .find(|s| s.label() == label)
            .ok_or_else(|| FbsError::Encoding(format!("unknown logical state label {label:?}")))
    }

    /// Measurement axis of the prepared eigenstate.
    pub fn axis(self) -> Pauli {
        match self {
            BsState::Zero | BsState::One => Pauli::Z,
            BsState::Plus | BsState::Minus => Pauli::X,
            BsState::PlusI | BsState::MinusI => Pauli::Y,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            BsState::Zero | BsState::Plus | BsState::PlusI => 1,
            _ => -1,
        }
    }

    /// The Y eigenstates use a bare product preparation with no definite
    /// stabilizer, so a single early fault can reach the logical outcome
    /// unseen; the other four start with one full detector graph live.
    pub fn fault_tolerant(self) -> bool {
        !matches!(self, BsState::PlusI | BsState::MinusI)
    }

    fn prep_ops(self) -> Vec<PrepOp> {
        let mut prep = Vec::new();
        match self {
            BsState::Zero => {}
            BsState::One => prep.push(PrepOp::PauliX(vec![3, 4, 5])),
            BsState::Plus => row_ghz(&mut prep),
            BsState::Minus => {
                row_ghz(&mut prep);
                prep.push(PrepOp::PauliZ(vec![1, 4, 7]));
            }
            BsState::PlusI => static_y_prep(&mut prep, 1),
            BsState::MinusI => static_y_prep(&mut prep, -1),
        }
        prep
    }
}

/// Transversal logical gates of the static mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsGate {
    X,
    Y,
    Z,
    /// Y(pi/2): physical Z layer + physical H layer + grid transpose.
    Y2,
}

impl BsGate {
    pub const ALL: [BsGate; 4] = [BsGate::X, BsGate::Y, BsGate::Z, BsGate::Y2];

    pub fn name(self) -> &'static str {
        match self {
            BsGate::X => "X",
            BsGate::Y => "Y",
            BsGate::Z => "Z",
            BsGate::Y2 => "Y2",
        }
    }
}

/// One static-mode experiment: prepare, stabilize, optionally rotate,
/// read out along the frame-mapped prepared axis.
#[derive(Debug, Clone)]
pub struct BsSpec {
    pub state: BsState,
    pub rounds: usize,
    /// Gates applied after the given round index (0 = right after
    /// preparation), in listed order within a round.
    pub gates: Vec<(usize, BsGate)>,
    pub lowering: Lowering,
}

impl BsSpec {
    pub fn memory(state: BsState, rounds: usize, lowering: Lowering) -> BsSpec {
        BsSpec { state, rounds, gates: Vec::new(), lowering }
    }
}

/// Grid transpose used by the Y(pi/2) relabeling.
const TRANSPOSE: [usize; 9] = [0, 3, 6, 1, 4, 7, 2, 5, 8];

/// Which physical qubit plays each grid role, plus the image of the
/// prepared logical axis under the gates applied so far.
#[derive(Debug, Clone, Copy)]
struct BsFrame {
    perm: [usize; 9],
    axis: Pauli,
    value: i8,
}

impl BsFrame {
    fn new(axis: Pauli, value: i8) -> BsFrame {
        BsFrame { perm: [0, 1, 2, 3, 4, 5, 6, 7, 8], axis, value }
    }

    /// Under the Y(pi/2) conjugation the axis images are Z -> X,
    /// X -> -Z, Y -> Y.
    fn rotate(&mut self) {
        let old = self.perm;
        for g in 0..N_DATA {
            self.perm[g] = old[TRANSPOSE[g]];
        }
        let (axis, value) = match self.axis {
            Pauli::Z => (Pauli::X, self.value),
            Pauli::X => (Pauli::Z, -self.value),
            Pauli::Y => (Pauli::Y, self.value),
            Pauli::I => unreachable!("logical axis is never identity"),
        };
        self.axis = axis;
        self.value = value;
    }

    fn pauli(&mut self, gate_axis: Pauli) {
        if gate_axis != self.axis {
            self.value = -self.value;
        }
    }
}

fn slot(stab: StabId) -> usize {
    StabId::ALL.iter().position(|&s| s == stab).expect("stabilizer in canonical list")
}

/// Detector graph coordinates: (row graph?, wall index).
fn graph_of(stab: StabId) -> (bool, usize) {
    match stab {
        StabId::SxC => (true, 0),
        StabId::SxA => (true, 1),
        StabId::SzD => (false, 0),
        StabId::SzB => (false, 1),
    }
}

#[derive(Debug, Clone)]
pub struct BsDetector {
    pub round: usize,
    pub stab: StabId,
    pub value: DerivedValue,
}

/// One evaluated shot.
#[derive(Debug, Clone, Copy)]
pub struct BsShot {
    /// No detector fired.
    pub retained: bool,
    pub n_fired: usize,
    /// Logical readout before correction.
    pub raw: i8,
    /// Logical readout after matching-based correction.
    pub corrected: i8,
}

pub struct BsPlan {
    spec: BsSpec,
    circuit: Circuit,
    pub detectors: Vec<BsDetector>,
    /// Raw logical readout parity.
    pub value: DerivedValue,
    /// Grid axis measured at the end (frame image of the prepared axis).
    pub readout_axis: Pauli,
    /// Noiseless value of the readout.
    pub expected: i8,
}

impl BsPlan {
    pub fn build(spec: BsSpec) -> Result<BsPlan, FbsError> {
        if spec.rounds == 0 {
            return Err(FbsError::NoRounds);
        }
        for &(after, _) in &spec.gates {
            if after > spec.rounds {
                return Err(FbsError::GateBeyondRounds(after));
            }
        }
        let planned = 12 * spec.rounds + N_DATA;
        if planned > MAX_MEAS {
            return Err(FbsError::TooManyMeasurements(planned));
        }

        let mut asm = Assembler::new(spec.lowering, 0);
        let n = asm.n_qubits();

        // preparation, mirrored on a tableau to fix initial stabilizer
        // values and validate the prepared eigenvalue
        let mut tab = Tableau::new(N_DATA)?;
        for op in &spec.state.prep_ops() {
            for ins in prep_instruction(op, n) {
                asm.circuit_mut().push(ins)?;
            }
            for ins in prep_instruction(op, N_DATA) {
                tab.apply(&ins)?;
            }
        }
        let axis0 = spec.state.axis();
        if tab.expect_pauli(&static_op(N_DATA, axis0))? != Some(spec.state.sign()) {
            return Err(FbsError::Encoding(format!(
                "prepared block is not the {} eigenstate {}",
                axis0.letter(),
                spec.state.sign(),
            )));
        }
        let mut stab_prev: [Option<DerivedValue>; 4] = [None; 4];
        for (k, stab) in StabId::ALL.iter().enumerate() {
            stab_prev[k] = tab.expect_pauli(&stab.op(N_DATA))?.map(DerivedValue::constant);
        }

        let mut frame = BsFrame::new(axis0, spec.state.sign());
        apply_gates(&spec, 0, &mut frame, &mut asm, &mut stab_prev)?;

        let mut detectors = Vec::new();
        for r in 1..=spec.rounds {
            for want_x in [true, false] {
                let items: Vec<GroupItem> = CHECKS
                    .iter()
                    .filter(|c| c.x_type == want_x)
                    .map(|c| {
                        let pair = [frame.perm[c.a], frame.perm[c.b]];
                        let op = if want_x {
                            PauliString::x_on(n, &pair)
                        } else {
                            PauliString::z_on(n, &pair)
                        };
                        Ok(GroupItem {
                            op: op.map_err(FbsError::Core)?,
                            tag: format!("r{r}:{}", c.name),
                            mediator: Mediator::Check(c),
                        })
                    })
                    .collect::<Result<_, FbsError>>()?;
                asm.measure_group(&items)?;
            }
            for (k, stab) in StabId::ALL.iter().enumerate() {
                let mut val = DerivedValue::one();
                for c in stab.formed_by().forming() {
                    val = val.mul(&asm.folded(&format!("r{r}:{}", c.name))?);
                }
                if let Some(prev) = stab_prev[k] {
                    detectors.push(BsDetector { round: r, stab: *stab, value: val.mul(&prev) });
                }
                stab_prev[k] = Some(val);
            }
            apply_gates(&spec, r, &mut frame, &mut asm, &mut stab_prev)?;
        }

        // transversal readout along the frame image of the prepared axis
        let readout_axis = frame.axis;
        let logical = static_op(N_DATA, readout_axis);
        let fill = if readout_axis == Pauli::Y { Pauli::Z } else { readout_axis };
        let mut basis = [fill; N_DATA];
        for g in logical.support() {
            basis[frame.perm[g]] = logical.letter_at(g);
        }
        asm.data_measurement(&basis)?;

        let data_site = |g: usize| -> Result<DerivedValue, FbsError> {
            Ok(DerivedValue::from_ordinal(asm.ordinal(&format!("data:q{}", frame.perm[g]))?))
        };
        let mut value = DerivedValue::one();
        for g in logical.support() {
            value = value.mul(&data_site(g)?);
        }
        if readout_axis != Pauli::Y {
            for stab in StabId::ALL.iter().filter(|s| s.x_type() == (readout_axis == Pauli::X)) {
                let mut derived = DerivedValue::one();
                for g in stab.support() {
                    derived = derived.mul(&data_site(g)?);
                }
                let last = stab_prev[slot(*stab)].expect("stabilizer refreshed every round");
                detectors.push(BsDetector {
                    round: spec.rounds + 1,
                    stab: *stab,
                    value: derived.mul(&last),
                });
            }
        }

        Ok(BsPlan {
            expected: frame.value,
            spec,
            circuit: asm.into_circuit(),
            detectors,
            value,
            readout_axis,
        })
    }

    pub fn spec(&self) -> &BsSpec {
        &self.spec
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Evaluate one shot: detector stream, raw readout, and the
    /// matching-corrected readout.
    pub fn evaluate(&self, record: &MeasRecord) -> Result<BsShot, FbsError> {
        if record.len() != self.circuit.measurement_count() {
            return Err(FbsError::Core(CoreError::RecordOutOfRange(
                record.len(),
                self.circuit.measurement_count(),
            )));
        }
        let bits = OutcomeBits::from_record(record)?;
        let mut n_fired = 0;
        let mut row = Vec::new();
        let mut col = Vec::new();
        for det in &self.detectors {
            if det.value.eval(&bits) < 0 {
                n_fired += 1;
                let (is_row, wall) = graph_of(det.stab);
                let defect = Defect { round: det.round, wall };
                if is_row {
                    row.push(defect);
                } else {
                    col.push(defect);
                }
            }
        }
        let raw = self.value.eval(&bits);
        // bit errors (column graph) flip Z-type readouts, phase errors
        // (row graph) flip X-type readouts, Y needs both
        let (need_row, need_col) = match self.readout_axis {
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
            Pauli::I => unreachable!(),
        };
        let mut corrected = raw;
        if need_row && decode(&row).flip {
            corrected = -corrected;
        }
        if need_col && decode(&col).flip {
            corrected = -corrected;
        }
        Ok(BsShot { retained: n_fired == 0, n_fired, raw, corrected })
    }
}

fn apply_gates(
    spec: &BsSpec,
    after: usize,
    frame: &mut BsFrame,
    asm: &mut Assembler,
    stab_prev: &mut [Option<DerivedValue>; 4],
) -> Result<(), FbsError> {
    let n = asm.n_qubits();
    for &(_, gate) in spec.gates.iter().filter(|&&(at, _)| at == after) {
        match gate {
            BsGate::X | BsGate::Y | BsGate::Z => {
                let axis = match gate {
                    BsGate::X => Pauli::X,
                    BsGate::Y => Pauli::Y,
                    _ => Pauli::Z,
                };
                let rep = static_op(N_DATA, axis);
                let ops: Vec<(usize, Pauli)> =
                    rep.support().map(|g| (frame.perm[g], rep.letter_at(g))).collect();
                let op = PauliString::from_ops(n, &ops).map_err(FbsError::Core)?;
                asm.circuit_mut().pauli_gate(op)?;
                frame.pauli(axis);
                // logical representatives commute with every stabilizer,
                // so stored values pass through unchanged
            }
            BsGate::Y2 => {
                let all: Vec<usize> = (0..N_DATA).collect();
                let z9 = PauliString::z_on(n, &all).map_err(FbsError::Core)?;
                asm.circuit_mut().pauli_gate(z9)?;
                for q in 0..N_DATA {
                    asm.circuit_mut().h(q)?;
                }
                frame.rotate();
                // the conjugated stabilizers swap labels with sign +1
                stab_prev.swap(slot(StabId::SxA), slot(StabId::SzB));
                stab_prev.swap(slot(StabId::SxC), slot(StabId::SzD));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faults::{outcome_flips, FaultKind, FaultSite, PauliFrame};
    use floqsim_core::Instruction;
    use floqsim_tableau::execute_record;

    fn noiseless_shot(plan: &BsPlan, seed: u64) -> BsShot {
        let record = execute_record(plan.circuit(), seed).unwrap();
        plan.evaluate(&record).unwrap()
    }

    #[test]
    fn state_labels_round_trip() {
        for state in BsState::ALL {
            assert_eq!(BsState::from_label(state.label()).unwrap(), state);
        }
        assert!(BsState::from_label("2").is_err());
        assert!(BsState::from_label("plus").is_err());
    }

    #[test]
    fn builds_count_measurements_and_detectors() {
        for lowering in [Lowering::Direct, Lowering::Ancilla] {
            for (state, dets) in [
                (BsState::Zero, 12),
                (BsState::One, 12),
                (BsState::Plus, 14),
                (BsState::Minus, 14),
                (BsState::PlusI, 8),
                (BsState::MinusI, 8),
            ] {
                let plan = BsPlan::build(BsSpec::memory(state, 3, lowering)).unwrap();
                assert_eq!(plan.circuit().measurement_count(), 3 * 12 + N_DATA);
                assert_eq!(plan.detectors.len(), dets, "{}", state.label());
                assert!(plan.value.is_defined());
            }
        }
    }

    #[test]
    fn noiseless_runs_are_exact() {
        for lowering in [Lowering::Direct, Lowering::Ancilla] {
            for state in BsState::ALL {
                let plan = BsPlan::build(BsSpec::memory(state, 2, lowering)).unwrap();
                assert_eq!(plan.readout_axis, state.axis());
                assert_eq!(plan.expected, state.sign());
                for seed in 0..4 {
                    let shot = noiseless_shot(&plan, seed);
                    assert!(shot.retained, "{} fired {}", state.label(), shot.n_fired);
                    assert_eq!(shot.raw, state.sign());
                    assert_eq!(shot.corrected, state.sign());
                }
            }
        }
    }

    #[test]
    fn y2_walks_the_zero_state_around_the_equator() {
        // |0> -> |+> -> |1> -> |-> -> |0>
        let walk = [(1, Pauli::X, 1), (2, Pauli::Z, -1), (3, Pauli::X, -1), (4, Pauli::Z, 1)];
        for (reps, axis, sign) in walk {
            let spec = BsSpec {
                state: BsState::Zero,
                rounds: 2,
                gates: vec![(1, BsGate::Y2); reps],
                lowering: Lowering::Ancilla,
            };
            let plan = BsPlan::build(spec).unwrap();
            assert_eq!(plan.readout_axis, axis);
            assert_eq!(plan.expected, sign);
            let shot = noiseless_shot(&plan, 7);
            assert!(shot.retained);
            assert_eq!(shot.corrected, sign);
        }
    }

    #[test]
    fn four_y2_gates_are_the_identity_on_every_state() {
        for state in BsState::ALL {
            let spec = BsSpec {
                state,
                rounds: 4,
                gates: vec![(1, BsGate::Y2), (2, BsGate::Y2), (3, BsGate::Y2), (4, BsGate::Y2)],
                lowering: Lowering::Direct,
            };
            let plan = BsPlan::build(spec).unwrap();
            assert_eq!(plan.readout_axis, state.axis());
            assert_eq!(plan.expected, state.sign());
            let shot = noiseless_shot(&plan, 11);
            assert!(shot.retained, "{}", state.label());
            assert_eq!(shot.corrected, state.sign());
        }
    }

    #[test]
    fn transversal_paulis_flip_the_right_expectations() {
        let cases = [
            (BsState::Zero, BsGate::X, -1),
            (BsState::Zero, BsGate::Z, 1),
            (BsState::Zero, BsGate::Y, -1),
            (BsState::Plus, BsGate::Z, -1),
            (BsState::Plus, BsGate::X, 1),
            (BsState::PlusI, BsGate::X, -1),
            (BsState::PlusI, BsGate::Y, 1),
        ];
        for (state, gate, sign) in cases {
            let spec = BsSpec {
                state,
                rounds: 2,
                gates: vec![(1, gate)],
                lowering: Lowering::Ancilla,
            };
            let plan = BsPlan::build(spec).unwrap();
            assert_eq!(plan.expected, sign, "{} {}", state.label(), gate.name());
            let shot = noiseless_shot(&plan, 3);
            assert!(shot.retained, "{} {}", state.label(), gate.name());
            assert_eq!(shot.corrected, sign);
        }
    }

    #[test]
    fn single_bit_errors_are_corrected() {
        let plan = BsPlan::build(BsSpec::memory(BsState::Zero, 4, Lowering::Direct)).unwrap();
        let clean = execute_record(plan.circuit(), 5).unwrap();
        let at = plan
            .circuit()
            .instructions()
            .iter()
            .position(|ins| matches!(ins, Instruction::MeasurePauli { tag, .. } if tag == "r2:z89"))
            .unwrap();
        for q in 0..N_DATA {
            let site = FaultSite {
                at,
                kind: FaultKind::Pauli(PauliFrame::on(q, Pauli::X)),
                label: format!("X{q}"),
            };
            let flips = outcome_flips(plan.circuit(), &site).unwrap();
            let outcomes: Vec<i8> = clean
                .as_slice()
                .iter()
                .enumerate()
                .map(|(i, &o)| if flips.ordinals().contains(&i) { -o } else { o })
                .collect();
            let shot = plan.evaluate(&MeasRecord::from_outcomes(outcomes)).unwrap();
            assert!(!shot.retained, "X{q} went unseen");
            let hits_logical = [1, 4, 7].contains(&q);
            assert_eq!(shot.raw, if hits_logical { -1 } else { 1 }, "X{q}");
            assert_eq!(shot.corrected, 1, "X{q} not corrected");
        }
    }

    #[test]
    fn check_readout_flips_pair_up_time_like() {
        let plan = BsPlan::build(BsSpec::memory(BsState::Plus, 4, Lowering::Direct)).unwrap();
        let clean = execute_record(plan.circuit(), 9).unwrap();
        let at = plan
            .circuit()
            .instructions()
            .iter()
            .position(|ins| matches!(ins, Instruction::MeasurePauli { tag, .. } if tag == "r2:x25"))
            .unwrap();
        let site = FaultSite { at, kind: FaultKind::Flip, label: "flip".into() };
        let flips = outcome_flips(plan.circuit(), &site).unwrap();
        let outcomes: Vec<i8> = clean
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, &o)| if flips.ordinals().contains(&i) { -o } else { o })
            .collect();
        let shot = plan.evaluate(&MeasRecord::from_outcomes(outcomes)).unwrap();
        assert_eq!(shot.n_fired, 2);
        assert_eq!(shot.raw, 1);
        assert_eq!(shot.corrected, 1);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let no_rounds = BsSpec::memory(BsState::Zero, 0, Lowering::Direct);
        assert!(matches!(BsPlan::build(no_rounds), Err(FbsError::NoRounds)));
        let late_gate = BsSpec {
            state: BsState::Zero,
            rounds: 3,
            gates: vec![(5, BsGate::X)],
            lowering: Lowering::Direct,
        };
        assert!(matches!(BsPlan::build(late_gate), Err(FbsError::GateBeyondRounds(5))));
        let too_long = BsSpec::memory(BsState::Zero, 21, Lowering::Direct);
        assert!(matches!(BsPlan::build(too_long), Err(FbsError::TooManyMeasurements(_))));
    }
}
