//! Error budget of the Bell-pair benchmark: finite-difference sensitivity
//! of the detected Bell infidelity to each noise component, under common
//! random numbers so the gradient sees the same fault realizations at
//! every evaluation point.

use super::{logical_cnot_matrix, pair_ket, pauli_of_index, split_shots, state_of, stream_seed};
use crate::config::RunConfig;
use crate::result::{BudgetComponent, BudgetSection, ResultDoc};
use crate::runner::run_fbs_shots;
use crate::HarnessError;
use floqsim_fbs::gates::LogicalGate;
use floqsim_fbs::plan::{ExperimentPlan, PlanSpec};
use floqsim_noise::{error_budget, NoiseError, NoiseModel};
use floqsim_tomo::two_qubit_pauli;

pub fn error_budget_experiment(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    let mut doc = ResultDoc::new(cfg)?;
    let state = state_of(&cfg.states[0])?;
    let ideal_ket = logical_cnot_matrix() * pair_ket(&state);

    // the three same-axis correlators and their ideal values; the
    // functional needs them to be full-weight, i.e. a stabilizer input
    let axes = [1usize, 2, 3];
    let mut ideal_corr = [0.0f64; 3];
    for (k, &a) in axes.iter().enumerate() {
        let m = two_qubit_pauli(a, a);
        ideal_corr[k] = (ideal_ket.adjoint() * m * ideal_ket)[(0, 0)].re;
        if (ideal_corr[k].abs() - 1.0).abs() > 1e-9 {
            return Err(HarnessError::Config(format!(
                "error-budget input {} does not yield a stabilizer Bell pair",
                cfg.states[0]
            )));
        }
    }

    let gates = vec![(cfg.gate_round, LogicalGate::CnotSD)];
    let mut plans = Vec::with_capacity(3);
    for &a in &axes {
        let spec = PlanSpec {
            state,
            rounds: cfg.rounds,
            gates: gates.clone(),
            setting: (pauli_of_index(a), pauli_of_index(a)),
            lowering: cfg.lowering.to_fbs(),
        };
        plans.push(ExperimentPlan::build(spec)?);
    }

    let shots_per = split_shots(cfg.shots, 3);
    let streams: Vec<u64> = (0..3).map(|k| stream_seed(cfg, k)).collect();
    let full = cfg.noise;

    let mut stashed: Option<HarnessError> = None;
    let mut full_raw_fid = None;
    let mut full_retention = None;
    let result = error_budget(&cfg.noise, |model: &NoiseModel| {
        let mut det = [0.0f64; 3];
        let mut raw = [0.0f64; 3];
        let mut retention = 0.0f64;
        for (k, plan) in plans.iter().enumerate() {
            match run_fbs_shots(plan, model, cfg.backend, shots_per, streams[k]) {
                Ok(batch) => {
                    det[k] = batch.stats.det_joint.unwrap_or(f64::NAN);
                    raw[k] = batch.stats.raw_joint;
                    retention += batch.stats.retention / 3.0;
                }
                Err(e) => {
                    stashed = Some(e);
                    return Err(NoiseError::NonFiniteEvaluation(
                        "bell simulation failed".into(),
                    ));
                }
            }
        }
        let fid = |c: &[f64; 3]| {
            (1.0 + ideal_corr[0] * c[0] + ideal_corr[1] * c[1] + ideal_corr[2] * c[2]) / 4.0
        };
        if *model == full {
            full_raw_fid = Some(fid(&raw));
            full_retention = Some(retention);
        }
        Ok(1.0 - fid(&det))
    });
    let budget = match result {
        Ok(b) => b,
        Err(e) => {
            return Err(stashed.unwrap_or_else(|| HarnessError::Sim(e.to_string())));
        }
    };

    doc.summary
        .insert("bell_fidelity_detected".into(), 1.0 - budget.total_infidelity);
    if let Some(f) = full_raw_fid {
        doc.summary.insert("bell_fidelity_raw".into(), f);
    }
    if let Some(r) = full_retention {
        doc.summary.insert("retention".into(), r);
    }
    for c in &budget.components {
        doc.summary
            .insert(format!("weight_{}", c.component.label()), c.weight);
        doc.summary.insert(
            format!("contribution_{}", c.component.label()),
            c.contribution,
        );
    }

    doc.budget = Some(BudgetSection {
        total_infidelity: budget.total_infidelity,
        components: budget
            .components
            .iter()
            .map(|c| BudgetComponent {
                component: c.component.label().to_string(),
                weight: c.weight,
                contribution: c.contribution,
                percent: c.percent,
            })
            .collect(),
        residual: budget.residual,
        residual_percent: budget.residual_percent,
    });
    Ok(doc)
}
