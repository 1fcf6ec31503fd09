//! Experiment plans: one physical circuit plus its compiled classical side.
//!
//! Building a plan emits the full circuit (encoding, stabilization rounds,
//! logical gates, final transversal readout) and simultaneously compiles
//! every classical quantity the experiment needs into [`DerivedValue`]
//! masks over the measurement record:
//!
//! * per-round frame signs for the dynamical X and Z axes, accumulated
//!   from folded check outcomes, encoding outcomes, and stabilizer
//!   baselines via the representative-transition identities;
//! * detectors: encoding consistency products, formed-stabilizer
//!   persistence between same-type rounds, and final readout stabilizers
//!   against their last formed value;
//! * the frame-corrected logical observables of the final readout,
//!   including the extra factors picked up by logical gates.
//!
//! Evaluating a shot is then a handful of popcounts per quantity.

pub use crate::encode::StateSpec;
use crate::encode::{self, EncMeasKind, EncodeSpec, GammaSpec, InitSpec, PrepOp};
use crate::frame::{atoms, DerivedValue, OutcomeBits};
use crate::gates::LogicalGate;
use crate::geometry::{check, dynamical_op, static_op, RoundType, StabId, N_DATA};
use crate::lower::{Assembler, GroupItem, Lowering, Mediator};
use crate::measure::readout_plan;
use crate::FbsError;
use floqsim_core::{Circuit, CoreError, MeasRecord, Pauli, PauliString};
use floqsim_tableau::Tableau;

/// What to run: a state, a number of stabilization rounds, logical gates
/// placed after given rounds, and the final readout setting.
#[derive(Debug, Clone)]
pub struct PlanSpec {
    pub state: StateSpec,
    pub rounds: usize,
    /// (round index, gate): applied right after that round's readout,
    /// in listed order.
    pub gates: Vec<(usize, LogicalGate)>,
    /// Final logical measurement axes (static, dynamical).
    pub setting: (Pauli, Pauli),
    pub lowering: Lowering,
}

impl PlanSpec {
    /// Plain memory experiment measured in the state's own eigenbasis.
    pub fn memory(state: StateSpec, rounds: usize, lowering: Lowering) -> PlanSpec {
        PlanSpec {
            state,
            rounds,
            gates: Vec::new(),
            setting: (state.s_axis, state.d_axis),
            lowering,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Detector {
    pub label: String,
    pub value: DerivedValue,
}

/// Per-shot post-processing result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotEval {
    /// No detector fired.
    pub retained: bool,
    pub n_fired: usize,
    pub s: i8,
    pub d: i8,
    pub joint: i8,
    pub s_defined: bool,
    pub d_defined: bool,
    pub joint_defined: bool,
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub spec: PlanSpec,
    circuit: Circuit,
    pub detectors: Vec<Detector>,
    pub value_s: DerivedValue,
    pub value_d: DerivedValue,
    pub value_joint: DerivedValue,
    pub final_basis: [Pauli; N_DATA],
    pub derived_stabs: Vec<StabId>,
    /// Frame signs after each round, index 0 = encoding.
    pub gamma_x: Vec<DerivedValue>,
    pub gamma_z: Vec<DerivedValue>,
    /// Instruction ranges of circuit segments, for fault injection:
    /// encoding (prep plus encoding measurements), one range per placed
    /// gate in emission order (ascending round, then listed order), and
    /// the final transversal readout.
    pub enc_range: std::ops::Range<usize>,
    pub gate_ranges: Vec<std::ops::Range<usize>>,
    pub readout_range: std::ops::Range<usize>,
}

const STAB_ATOMS: [u8; 4] = [atoms::SXA, atoms::SZB, atoms::SXC, atoms::SZD];

fn stab_slot(sid: StabId) -> usize {
    StabId::ALL.iter().position(|s| *s == sid).expect("member")
}

fn axis_slot(p: Pauli) -> usize {
    match p {
        Pauli::X => 0,
        Pauli::Y => 1,
        Pauli::Z => 2,
        Pauli::I => unreachable!("identity axis rejected earlier"),
    }
}

fn lift(op: &PauliString, n: usize) -> Result<PauliString, FbsError> {
    Ok(PauliString::from_masks(
        n,
        op.x_mask(),
        op.z_mask(),
        op.phase_exponent(),
    )?)
}

fn enc_op9(enc: &EncodeSpec, tag: &str) -> PauliString {
    enc.all_meas()
        .find(|m| m.tag == tag)
        .unwrap_or_else(|| panic!("encoding declares unknown tag {tag}"))
        .op9()
}

/// Product of folded values for a list of encoding tags.
fn folded_product(asm: &Assembler, tags: &[String]) -> Result<DerivedValue, FbsError> {
    let mut dv = DerivedValue::one();
    for tag in tags {
        dv = dv.mul(&asm.folded(tag)?);
    }
    Ok(dv)
}

/// Initial value of `target` decomposed as recorded encoding outcomes times
/// the prep-state constant of the leftover factor.
fn known_init(
    asm: &Assembler,
    enc: &EncodeSpec,
    t0: &Tableau,
    target: &PauliString,
    tags: &[String],
) -> Result<DerivedValue, FbsError> {
    let mut rest = target.clone();
    for tag in tags {
        rest = rest.mul(&enc_op9(enc, tag))?;
    }
    let c = t0
        .expect_pauli(&rest)?
        .ok_or_else(|| FbsError::Encoding(format!("indefinite baseline for {target}")))?;
    Ok(DerivedValue::constant(c).mul(&folded_product(asm, tags)?))
}

fn init_value(
    asm: &Assembler,
    enc: &EncodeSpec,
    t0: &Tableau,
    target: &PauliString,
    init: &InitSpec,
    atom: u8,
) -> Result<DerivedValue, FbsError> {
    match init {
        InitSpec::Known { tags } => known_init(asm, enc, t0, target, tags),
        InitSpec::Random => Ok(DerivedValue::unknown(atom)),
    }
}

impl ExperimentPlan {
    pub fn build(spec: PlanSpec) -> Result<ExperimentPlan, FbsError> {
        if spec.rounds == 0 {
            return Err(FbsError::NoRounds);
        }
        for (i, g) in &spec.gates {
            if *i == 0 || *i > spec.rounds {
                return Err(FbsError::GateBeyondRounds(*i));
            }
            if let Some(phase) = g.required_phase() {
                if i % 4 != phase {
                    return Err(FbsError::GatePlacement {
                        gate: g.name(),
                        want: phase,
                        got: *i,
                    });
                }
            }
        }

        let enc = encode::spec_for(spec.state);
        let t0 = encode::prep_tableau(&enc)?;

        let enc_fresh = match spec.lowering {
            Lowering::Ancilla => enc.n_fresh(),
            Lowering::Direct => 0,
        };
        let gate_fresh: usize = spec.gates.iter().map(|(_, g)| g.fresh_needed()).sum();
        let mut asm = Assembler::new(spec.lowering, enc_fresh + gate_fresh);
        let n = asm.n_qubits();

        // state preparation unitaries
        for op in &enc.prep {
            let c = asm.circuit_mut();
            match op {
                PrepOp::H(q) => c.h(*q)?,
                PrepOp::S(q) => c.s(*q)?,
                PrepOp::Cx(a, b) => c.cx(*a, *b)?,
                PrepOp::PauliX(qs) => c.pauli_gate(PauliString::x_on(n, qs)?)?,
                PrepOp::PauliZ(qs) => c.pauli_gate(PauliString::z_on(n, qs)?)?,
            }
        }

        // encoding measurements
        for group in &enc.groups {
            let items = group
                .iter()
                .map(|m| {
                    Ok(GroupItem {
                        op: lift(&m.op9(), n)?,
                        tag: m.tag.clone(),
                        mediator: match m.kind {
                            EncMeasKind::Check(c) => Mediator::Check(c),
                            _ => Mediator::Fresh,
                        },
                    })
                })
                .collect::<Result<Vec<_>, FbsError>>()?;
            asm.measure_group(&items)?;
        }
        let enc_range = 0..asm.circuit().len();

        // baselines seeded by the encoding
        let mut stab_val = [DerivedValue::one(); 4];
        for (k, sid) in StabId::ALL.iter().enumerate() {
            stab_val[k] = init_value(
                &asm,
                &enc,
                &t0,
                &sid.op(N_DATA),
                &enc.stabs[k],
                STAB_ATOMS[k],
            )?;
        }
        let stab_init = stab_val;
        let z12_0 = init_value(&asm, &enc, &t0, &check("z12").op(N_DATA), &enc.z12_0, atoms::Z12_0)?;
        let z56_0 = init_value(&asm, &enc, &t0, &check("z56").op(N_DATA), &enc.z56_0, atoms::Z56_0)?;

        let branch_gamma = |asm: &Assembler, g: &GammaSpec, atom: u8| -> Result<DerivedValue, FbsError> {
            Ok(match g {
                GammaSpec::Convention => DerivedValue::one(),
                GammaSpec::BranchTags(tags) => {
                    DerivedValue::constant(spec.state.d_sign).mul(&folded_product(asm, tags)?)
                }
                GammaSpec::Unknown => DerivedValue::unknown(atom),
            })
        };
        let mut gamma_x = vec![branch_gamma(&asm, &enc.gamma_x0, atoms::GX0)?];
        let mut gamma_z = vec![branch_gamma(&asm, &enc.gamma_z0, atoms::GZ0)?];

        let mut detectors = Vec::new();
        for cons in &enc.consistency {
            let c = t0.expect_pauli(&cons.product.op(N_DATA))?.ok_or_else(|| {
                FbsError::Encoding(format!("indefinite consistency product {}", cons.label))
            })?;
            detectors.push(Detector {
                label: cons.label.clone(),
                value: DerivedValue::constant(c).mul(&folded_product(&asm, &cons.tags)?),
            });
        }

        // stabilization rounds
        let mut forming: Vec<DerivedValue> = vec![DerivedValue::one()]; // slot 0 unused
        let mut fac_s = [DerivedValue::one(); 3];
        let mut fac_d = [DerivedValue::one(); 3];
        let mut gate_ranges = Vec::with_capacity(spec.gates.len());
        for r in 1..=spec.rounds {
            let t = RoundType::of_round(r);
            let items: Vec<GroupItem> = t
                .schedule()
                .iter()
                .map(|c| GroupItem::check(c, n, format!("r{r}:{}", c.name)))
                .collect();
            asm.measure_group(&items)?;

            let f = |rr: usize, name: &str| asm.folded(&format!("r{rr}:{name}"));

            // frame increments for the representative transition into round r
            let (d_gx, d_gz) = match r % 4 {
                1 => {
                    let gx = f(r, "x69")?
                        .mul(&f(r, "x25")?)
                        .mul(&stab_val[stab_slot(StabId::SxC)]);
                    let gz = if r == 1 {
                        z12_0.mul(&z56_0)
                    } else {
                        f(r - 1, "z12")?.mul(&f(r - 1, "z56")?)
                    }
                    .mul(&stab_val[stab_slot(StabId::SzB)]);
                    (gx, gz)
                }
                2 => {
                    let gx = f(r - 1, "x47")?;
                    let gz = f(r, "z23")?
                        .mul(&f(r, "z45")?)
                        .mul(&stab_val[stab_slot(StabId::SzD)]);
                    (gx, gz)
                }
                3 => (f(r, "x14")?, f(r - 1, "z89")?),
                _ => {
                    let gx = f(r - 1, "x36")?
                        .mul(&f(r - 1, "x58")?)
                        .mul(&stab_val[stab_slot(StabId::SxA)]);
                    (gx, f(r, "z78")?)
                }
            };
            gamma_x.push(gamma_x.last().expect("nonempty").mul(&d_gx));
            gamma_z.push(gamma_z.last().expect("nonempty").mul(&d_gz));

            // formed-stabilizer persistence detector
            let mut formed_now = DerivedValue::one();
            for c in t.forming() {
                formed_now = formed_now.mul(&f(r, c.name)?);
            }
            let sid = t.formed_stabilizer();
            let reference = if r > 4 {
                forming[r - 4]
            } else {
                stab_init[stab_slot(sid)]
            };
            if reference.is_defined() {
                detectors.push(Detector {
                    label: format!("det:r{r}:{}", sid.label()),
                    value: formed_now.mul(&reference),
                });
            }
            forming.push(formed_now);
            // a freshly formed stabilizer pins a previously random baseline
            if !stab_val[stab_slot(sid)].is_defined() {
                stab_val[stab_slot(sid)] = formed_now;
            }

            // logical gates placed after this round
            for (gi, g) in &spec.gates {
                if *gi != r {
                    continue;
                }
                let gate_start = asm.circuit().len();
                g.emit(&mut asm, t)?;
                gate_ranges.push(gate_start..asm.circuit().len());
                match g {
                    LogicalGate::RotZd(_) => {
                        fac_d[1] = fac_d[1].mul(&gamma_z[r]);
                    }
                    LogicalGate::RotXd(_) => {
                        fac_d[1] = fac_d[1].mul(&gamma_x[r]);
                    }
                    LogicalGate::CnotSD => {
                        fac_s[0] = fac_s[0].mul(&gamma_x[r]);
                        fac_s[1] = fac_s[1].mul(&gamma_x[r]);
                        let szd = stab_init[stab_slot(StabId::SzD)];
                        fac_d[1] = fac_d[1].mul(&szd);
                        fac_d[2] = fac_d[2].mul(&szd);
                    }
                    _ => {}
                }
            }
        }

        // final transversal readout
        let t_final = RoundType::of_round(spec.rounds);
        let rp = readout_plan(spec.setting.0, spec.setting.1, t_final)?;
        let readout_start = asm.circuit().len();
        asm.data_measurement(&rp.basis)?;
        let readout_range = readout_start..asm.circuit().len();

        let data_parity = |asm: &Assembler, op: &PauliString| -> Result<DerivedValue, FbsError> {
            let mut dv = DerivedValue::one();
            for q in op.support() {
                dv = dv.mul(&DerivedValue::from_ordinal(asm.ordinal(&format!("data:q{q}"))?));
            }
            Ok(dv)
        };

        for sid in &rp.derived_stabs {
            let mut reference = None;
            for r in (1..=spec.rounds).rev() {
                if RoundType::of_round(r).formed_stabilizer() == *sid {
                    reference = Some(forming[r]);
                    break;
                }
            }
            let reference = reference.unwrap_or(stab_init[stab_slot(*sid)]);
            if reference.is_defined() {
                detectors.push(Detector {
                    label: format!("det:data:{}", sid.label()),
                    value: data_parity(&asm, &sid.op(N_DATA))?.mul(&reference),
                });
            }
        }

        let gamma_final = |axis: Pauli| -> DerivedValue {
            let r = spec.rounds;
            match axis {
                Pauli::X => gamma_x[r],
                Pauli::Z => gamma_z[r],
                Pauli::Y => gamma_x[r].mul(&gamma_z[r]),
                Pauli::I => unreachable!("identity axis rejected earlier"),
            }
        };
        let value_s = data_parity(&asm, &static_op(N_DATA, spec.setting.0))?
            .mul(&fac_s[axis_slot(spec.setting.0)]);
        let value_d = data_parity(&asm, &dynamical_op(N_DATA, spec.setting.1, t_final))?
            .mul(&gamma_final(spec.setting.1))
            .mul(&fac_d[axis_slot(spec.setting.1)]);
        let value_joint = value_s.mul(&value_d);

        Ok(ExperimentPlan {
            spec,
            circuit: asm.into_circuit(),
            detectors,
            value_s,
            value_d,
            value_joint,
            final_basis: rp.basis,
            derived_stabs: rp.derived_stabs,
            gamma_x,
            gamma_z,
            enc_range,
            gate_ranges,
            readout_range,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Post-process one shot record.
    pub fn evaluate(&self, record: &MeasRecord) -> Result<ShotEval, FbsError> {
        if record.len() != self.circuit.measurement_count() {
            return Err(FbsError::Core(CoreError::RecordOutOfRange(
                record.len(),
                self.circuit.measurement_count(),
            )));
        }
        let bits = OutcomeBits::from_record(record)?;
        let n_fired = self
            .detectors
            .iter()
            .filter(|d| d.value.eval(&bits) < 0)
            .count();
        Ok(ShotEval {
            retained: n_fired == 0,
            n_fired,
            s: self.value_s.eval(&bits),
            d: self.value_d.eval(&bits),
            joint: self.value_joint.eval(&bits),
            s_defined: self.value_s.is_defined(),
            d_defined: self.value_d.is_defined(),
            joint_defined: self.value_joint.is_defined(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use floqsim_vector::enumerate_outcomes;

    #[test]
    fn plans_build_for_every_state_and_lowering() {
        for state in StateSpec::all() {
            for lowering in [Lowering::Direct, Lowering::Ancilla] {
                let plan = ExperimentPlan::build(PlanSpec::memory(state, 6, lowering))
                    .unwrap_or_else(|e| panic!("{} {lowering:?}: {e}", state.label()));
                // retention observable is always evaluable in the eigenbasis
                assert!(plan.value_joint.is_defined(), "{}", state.label());
                // every round leaves a frame entry
                assert_eq!(plan.gamma_x.len(), 7);
                let meas = plan.circuit().measurement_count();
                assert_eq!(
                    meas,
                    enc_meas_count(state) + 6 * 4 + N_DATA,
                    "{}",
                    state.label()
                );
            }
        }
    }

    fn enc_meas_count(state: StateSpec) -> usize {
        encode::spec_for(state)
            .groups
            .iter()
            .map(|g| g.len())
            .sum()
    }

    #[test]
    fn placement_validation() {
        let state = StateSpec::new(Pauli::X, 1, Pauli::Z, 1);
        let bad_phase = PlanSpec {
            gates: vec![(3, LogicalGate::CnotSD)],
            ..PlanSpec::memory(state, 6, Lowering::Direct)
        };
        assert!(matches!(
            ExperimentPlan::build(bad_phase),
            Err(FbsError::GatePlacement { want: 2, got: 3, .. })
        ));
        let beyond = PlanSpec {
            gates: vec![(7, LogicalGate::RotZs(0.1))],
            ..PlanSpec::memory(state, 6, Lowering::Direct)
        };
        assert!(matches!(
            ExperimentPlan::build(beyond),
            Err(FbsError::GateBeyondRounds(7))
        ));
        assert!(matches!(
            ExperimentPlan::build(PlanSpec::memory(state, 0, Lowering::Direct)),
            Err(FbsError::NoRounds)
        ));
    }

    #[test]
    fn detector_structure_for_reference_states() {
        // x+z+: no encoding measurements, all baselines fixed
        let xz = ExperimentPlan::build(PlanSpec::memory(
            StateSpec::new(Pauli::X, 1, Pauli::Z, 1),
            8,
            Lowering::Ancilla,
        ))
        .unwrap();
        // 8 round detectors plus the final readout stabilizer
        assert_eq!(xz.detectors.len(), 9);
        // z+z+: two encoding consistency products, two final stabilizers
        let zz = ExperimentPlan::build(PlanSpec::memory(
            StateSpec::new(Pauli::Z, 1, Pauli::Z, 1),
            8,
            Lowering::Ancilla,
        ))
        .unwrap();
        assert_eq!(zz.detectors.len(), 2 + 8 + 2);
    }

    #[test]
    fn noiseless_shots_are_retained_with_exact_values() {
        // the smoke version of the frame oracle: every outcome branch of a
        // short noiseless run is retained and reports the target eigenvalues
        for (sa, ss, da, ds) in [
            (Pauli::X, 1i8, Pauli::Z, 1i8),
            (Pauli::X, -1, Pauli::Z, -1),
            (Pauli::Z, 1, Pauli::X, -1),
        ] {
            let state = StateSpec::new(sa, ss, da, ds);
            for rounds in [1usize, 2, 3] {
                let plan = ExperimentPlan::build(PlanSpec::memory(
                    state,
                    rounds,
                    Lowering::Direct,
                ))
                .unwrap();
                let leaves = enumerate_outcomes(plan.circuit(), 1 << 16).unwrap();
                let mut total = 0.0;
                for leaf in &leaves {
                    let eval = plan.evaluate(&leaf.record).unwrap();
                    assert!(eval.retained, "{} r{rounds}", state.label());
                    assert_eq!(eval.s, ss, "{} r{rounds}", state.label());
                    assert_eq!(eval.d, ds, "{} r{rounds}", state.label());
                    assert_eq!(eval.joint, ss * ds);
                    assert!(eval.joint_defined);
                    total += leaf.probability;
                }
                assert!((total - 1.0).abs() < 1e-9);
            }
        }
    }
}
