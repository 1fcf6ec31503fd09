//! Exact outcome-tree enumeration.
//!
//! Walks every measurement branch of a noiseless circuit depth-first,
//! pruning zero-probability branches and never splitting on deterministic
//! outcomes, so the leaf count equals the number of distinct outcome
//! histories. This is the oracle used for post-selected statistics.

use crate::{StateVector, VectorError};
use floqsim_core::{Circuit, Instruction, MeasRecord, Pauli, PauliString};

/// Probability threshold below which a branch is treated as impossible.
const PRUNE_EPS: f64 = 1e-12;

/// Default ceiling on the number of enumerated leaves.
pub const DEFAULT_BRANCH_CAP: usize = 1 << 12;

/// One exhaustive-outcome history.
#[derive(Debug, Clone)]
pub struct Leaf {
    pub probability: f64,
    pub record: MeasRecord,
}

/// Enumerate all outcome branches, calling `visit` once per leaf with the
/// joint probability, the outcome record, and the final collapsed state.
/// Returns the leaf count. Stochastic noise sites are rejected; run those
/// through the sampling executor instead.
pub fn enumerate_with<F>(
    circuit: &Circuit,
    branch_cap: usize,
    visit: &mut F,
) -> Result<usize, VectorError>
where
    F: FnMut(f64, &MeasRecord, &StateVector),
{
    let sv = StateVector::zero(circuit.n_qubits())?;
    let mut count = 0usize;
    dfs(
        sv,
        circuit.instructions(),
        Vec::with_capacity(circuit.measurement_count()),
        1.0,
        branch_cap,
        &mut count,
        visit,
    )?;
    Ok(count)
}

/// Enumerate and collect (probability, record) leaves.
pub fn enumerate_outcomes(circuit: &Circuit, branch_cap: usize) -> Result<Vec<Leaf>, VectorError> {
    let mut leaves = Vec::new();
    enumerate_with(circuit, branch_cap, &mut |p, record, _| {
        leaves.push(Leaf {
            probability: p,
            record: record.clone(),
        })
    })?;
    Ok(leaves)
}

#[allow(clippy::too_many_arguments)]
fn dfs<F>(
    mut sv: StateVector,
    instrs: &[Instruction],
    mut outcomes: Vec<i8>,
    mut prob: f64,
    cap: usize,
    count: &mut usize,
    visit: &mut F,
) -> Result<(), VectorError>
where
    F: FnMut(f64, &MeasRecord, &StateVector),
{
    let n = sv.n_qubits();
    let mut i = 0;
    while i < instrs.len() {
        match &instrs[i] {
            Instruction::MeasurePauli { op, .. } => {
                let p_plus = ((1.0 + sv.expectation(op)?) / 2.0).clamp(0.0, 1.0);
                if p_plus > PRUNE_EPS && p_plus < 1.0 - PRUNE_EPS {
                    let mut minus = sv.clone();
                    minus.collapse(op, -1)?;
                    let mut minus_outcomes = outcomes.clone();
                    minus_outcomes.push(-1);
                    dfs(
                        minus,
                        &instrs[i + 1..],
                        minus_outcomes,
                        prob * (1.0 - p_plus),
                        cap,
                        count,
                        visit,
                    )?;
                    sv.collapse(op, 1)?;
                    outcomes.push(1);
                    prob *= p_plus;
                } else {
                    let outcome: i8 = if p_plus >= 0.5 { 1 } else { -1 };
                    sv.collapse(op, outcome)?;
                    outcomes.push(outcome);
                }
            }
            Instruction::ResetZ(q) => {
                let z = PauliString::single(n, *q, Pauli::Z).map_err(VectorError::Core)?;
                let x = PauliString::single(n, *q, Pauli::X).map_err(VectorError::Core)?;
                let p_plus = ((1.0 + sv.expectation(&z)?) / 2.0).clamp(0.0, 1.0);
                if p_plus > PRUNE_EPS && p_plus < 1.0 - PRUNE_EPS {
                    let mut minus = sv.clone();
                    minus.collapse(&z, -1)?;
                    minus.apply(&Instruction::PauliGate(x.clone()))?;
                    dfs(
                        minus,
                        &instrs[i + 1..],
                        outcomes.clone(),
                        prob * (1.0 - p_plus),
                        cap,
                        count,
                        visit,
                    )?;
                    sv.collapse(&z, 1)?;
                    prob *= p_plus;
                } else {
                    let outcome: i8 = if p_plus >= 0.5 { 1 } else { -1 };
                    sv.collapse(&z, outcome)?;
                    if outcome == -1 {
                        sv.apply(&Instruction::PauliGate(x))?;
                    }
                }
            }
            Instruction::NoiseSite { .. } => return Err(VectorError::NoiseInEnumeration),
            other => sv.apply(other)?,
        }
        i += 1;
    }
    *count += 1;
    if *count > cap {
        return Err(VectorError::BranchCapExceeded(cap));
    }
    let record = MeasRecord::from_outcomes(outcomes);
    visit(prob, &record, &sv);
    Ok(())
}
