//! Exhaustive single-fault injection and fault-tolerance labeling.
//!
//! A fault is one elementary error at one circuit location: a Pauli error
//! right after a gate or idle window (the locations where the stochastic
//! noise model attaches depolarizing channels), or a classical flip of one
//! readout. Faults propagate symbolically as an X/Z bit-mask frame through
//! the Clifford instructions, phases dropped: phases never change which
//! outcomes flip, and flipped outcomes are all that detectors and logical
//! values can see.
//!
//! A circuit segment is fault tolerant when every single fault inside it
//! is either detected (flips at least one detector of the plan) or
//! harmless (flips neither the static nor the dynamical logical readout
//! value).

use crate::encode::StateSpec;
use crate::frame::TagMask;
use crate::lower::Lowering;
use crate::plan::{ExperimentPlan, PlanSpec};
use crate::FbsError;
use floqsim_core::{Circuit, Instruction, Pauli, PauliString};
use std::ops::Range;

/// A Pauli error on the full register, phases dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PauliFrame {
    pub fx: u64,
    pub fz: u64,
}

impl PauliFrame {
    pub fn on(q: usize, p: Pauli) -> PauliFrame {
        let bit = 1u64 << q;
        match p {
            Pauli::I => PauliFrame::default(),
            Pauli::X => PauliFrame { fx: bit, fz: 0 },
            Pauli::Y => PauliFrame { fx: bit, fz: bit },
            Pauli::Z => PauliFrame { fx: 0, fz: bit },
        }
    }

    pub fn compose(self, other: PauliFrame) -> PauliFrame {
        PauliFrame { fx: self.fx ^ other.fx, fz: self.fz ^ other.fz }
    }

    pub fn is_identity(self) -> bool {
        self.fx == 0 && self.fz == 0
    }

    pub fn anticommutes(self, op: &PauliString) -> bool {
        ((self.fx & op.z_mask()).count_ones() + (self.fz & op.x_mask()).count_ones()) & 1 == 1
    }

    /// Conjugate through one instruction (frame moves forward in time).
    /// Rotations pass the frame through only when it commutes with the
    /// rotation generator; otherwise propagation is not Clifford.
    pub fn step(&mut self, instr: &Instruction) -> Result<(), FbsError> {
        match instr {
            Instruction::H(q) => {
                let x = self.fx >> q & 1;
                let z = self.fz >> q & 1;
                self.fx ^= (x ^ z) << q;
                self.fz ^= (x ^ z) << q;
            }
            Instruction::S(q) | Instruction::Sdg(q) => {
                self.fz ^= self.fx & (1 << q);
            }
            Instruction::PauliGate(_) => {}
            Instruction::Rz { q, .. } => {
                if self.fx >> q & 1 == 1 {
                    return Err(FbsError::NonCliffordFault(format!("Rz on qubit {q}")));
                }
            }
            Instruction::Rx { q, .. } => {
                if self.fz >> q & 1 == 1 {
                    return Err(FbsError::NonCliffordFault(format!("Rx on qubit {q}")));
                }
            }
            Instruction::Ry { q, .. } => {
                if (self.fx ^ self.fz) >> q & 1 == 1 {
                    return Err(FbsError::NonCliffordFault(format!("Ry on qubit {q}")));
                }
            }
            Instruction::Cx { control, target } => {
                self.fx ^= (self.fx >> control & 1) << target;
                self.fz ^= (self.fz >> target & 1) << control;
            }
            Instruction::Cz { a, b } => {
                let xa = self.fx >> a & 1;
                let xb = self.fx >> b & 1;
                self.fz ^= xa << b;
                self.fz ^= xb << a;
            }
            Instruction::ResetZ(q) => {
                self.fx &= !(1 << q);
                self.fz &= !(1 << q);
            }
            Instruction::MeasurePauli { .. }
            | Instruction::NoiseSite { .. }
            | Instruction::IdleDd { .. } => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum FaultKind {
    /// Error inserted right after the instruction at the site.
    Pauli(PauliFrame),
    /// Classical flip of the measurement at the site.
    Flip,
}

#[derive(Debug, Clone)]
pub struct FaultSite {
    /// Instruction index the fault attaches to.
    pub at: usize,
    pub kind: FaultKind,
    pub label: String,
}

fn single_site_faults(out: &mut Vec<FaultSite>, at: usize, q: usize) {
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        out.push(FaultSite {
            at,
            kind: FaultKind::Pauli(PauliFrame::on(q, p)),
            label: format!("i{at}:{}{q}", p.letter()),
        });
    }
}

fn pair_site_faults(out: &mut Vec<FaultSite>, at: usize, a: usize, b: usize) {
    for pa in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
        for pb in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            if pa == Pauli::I && pb == Pauli::I {
                continue;
            }
            let frame = PauliFrame::on(a, pa).compose(PauliFrame::on(b, pb));
            out.push(FaultSite {
                at,
                kind: FaultKind::Pauli(frame),
                label: format!("i{at}:{}{a}.{}{b}", pa.letter(), pb.letter()),
            });
        }
    }
}

/// All elementary faults attached to instructions in `range`, mirroring
/// the locations where the noise model places its channels: Pauli errors
/// after every gate, per idling qubit in every idle window, and one
/// readout flip per measurement.
pub fn enumerate_sites(circuit: &Circuit, range: Range<usize>) -> Vec<FaultSite> {
    let mut out = Vec::new();
    for (k, instr) in circuit.instructions().iter().enumerate() {
        if !range.contains(&k) {
            continue;
        }
        match instr {
            Instruction::H(q)
            | Instruction::S(q)
            | Instruction::Sdg(q)
            | Instruction::Rx { q, .. }
            | Instruction::Ry { q, .. }
            | Instruction::Rz { q, .. } => single_site_faults(&mut out, k, *q),
            Instruction::PauliGate(op) => {
                for q in op.support() {
                    single_site_faults(&mut out, k, q);
                }
            }
            Instruction::Cx { control: a, target: b } | Instruction::Cz { a, b } => {
                pair_site_faults(&mut out, k, *a, *b);
            }
            Instruction::IdleDd { qubits } => {
                for &q in qubits {
                    single_site_faults(&mut out, k, q);
                }
            }
            Instruction::MeasurePauli { tag, .. } => out.push(FaultSite {
                at: k,
                kind: FaultKind::Flip,
                label: format!("i{k}:flip:{tag}"),
            }),
            Instruction::ResetZ(_) | Instruction::NoiseSite { .. } => {}
        }
    }
    out
}

/// The set of measurement ordinals whose outcomes the fault flips.
pub fn outcome_flips(circuit: &Circuit, site: &FaultSite) -> Result<TagMask, FbsError> {
    let mut flips = TagMask::empty();
    let mut frame = PauliFrame::default();
    let mut meas = 0usize;
    for (k, instr) in circuit.instructions().iter().enumerate() {
        if k <= site.at {
            if let Instruction::MeasurePauli { .. } = instr {
                if k == site.at {
                    if let FaultKind::Flip = site.kind {
                        flips.toggle(meas);
                    }
                }
                meas += 1;
            }
            if k == site.at {
                if let FaultKind::Pauli(f) = site.kind {
                    frame = f;
                }
            }
            continue;
        }
        if frame.is_identity() {
            if let Instruction::MeasurePauli { .. } = instr {
                meas += 1;
            }
            continue;
        }
        if let Instruction::MeasurePauli { op, .. } = instr {
            if frame.anticommutes(op) {
                flips.toggle(meas);
            }
            meas += 1;
        } else {
            frame
                .step(instr)
                .map_err(|e| FbsError::NonCliffordFault(format!("{} hit {e}", site.label)))?;
        }
    }
    Ok(flips)
}

/// Effect of one fault on a plan's classical outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultEffect {
    pub detected: bool,
    pub flips_s: bool,
    pub flips_d: bool,
}

impl FaultEffect {
    pub fn harmful(&self) -> bool {
        self.flips_s || self.flips_d
    }
}

pub fn assess(plan: &ExperimentPlan, site: &FaultSite) -> Result<FaultEffect, FbsError> {
    let flips = outcome_flips(plan.circuit(), site)?;
    Ok(FaultEffect {
        detected: plan.detectors.iter().any(|d| d.value.flips_under(&flips)),
        flips_s: plan.value_s.flips_under(&flips),
        flips_d: plan.value_d.flips_under(&flips),
    })
}

/// Verdict for one circuit segment under exhaustive single-fault injection.
#[derive(Debug, Clone)]
pub struct SegmentReport {
    pub n_faults: usize,
    /// Labels of faults that flip a logical value without firing any
    /// detector. Empty iff the segment is fault tolerant.
    pub undetected_harmful: Vec<String>,
}

impl SegmentReport {
    pub fn fault_tolerant(&self) -> bool {
        self.undetected_harmful.is_empty()
    }
}

pub fn assess_segment(plan: &ExperimentPlan, range: Range<usize>) -> Result<SegmentReport, FbsError> {
    let sites = enumerate_sites(plan.circuit(), range);
    let mut undetected_harmful = Vec::new();
    for site in &sites {
        let effect = assess(plan, site)?;
        if !effect.detected && effect.harmful() {
            undetected_harmful.push(site.label.clone());
        }
    }
    Ok(SegmentReport { n_faults: sites.len(), undetected_harmful })
}

/// Fault injection over the encoding segment of a memory experiment,
/// assessed in the state's own eigenbasis. Needs enough rounds for every
/// detector family to come up (each stabilizer is compared at least once),
/// so `rounds` should be at least 8.
pub fn encoding_fault_report(
    state: StateSpec,
    rounds: usize,
    lowering: Lowering,
) -> Result<SegmentReport, FbsError> {
    let plan = ExperimentPlan::build(PlanSpec::memory(state, rounds, lowering))?;
    let range = plan.enc_range.clone();
    assess_segment(&plan, range)
}

/// Fault injection over the final transversal readout of a memory run of
/// a fault-tolerantly encoded reference state, measured in the given
/// setting.
pub fn readout_fault_report(
    setting: (Pauli, Pauli),
    rounds: usize,
    lowering: Lowering,
) -> Result<SegmentReport, FbsError> {
    let state = StateSpec::new(Pauli::X, 1, Pauli::Z, 1);
    let plan = ExperimentPlan::build(PlanSpec {
        setting,
        ..PlanSpec::memory(state, rounds, lowering)
    })?;
    let range = plan.readout_range.clone();
    assess_segment(&plan, range)
}
