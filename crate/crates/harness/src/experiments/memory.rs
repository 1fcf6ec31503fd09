//! Floquet-mode memory experiments: plain stabilization (`fbs-memory`) and
//! stabilization interleaved with transversal logical Paulis
//! (`pauli-gates`). Both sweep the round count and emit raw and detected
//! expectation series with exponential decay fits, including the
//! every-fourth-round subsampled view where the schedule period makes the
//! full series non-monotone.

use super::{anticommutes, setting_axes, split_shots, state_of, stream_seed};
use crate::config::{parse_fbs_gates, PostKind, RunConfig};
use crate::fit::fit_exp_decay;
use crate::result::{Column, DetectionPoint, NamedFit, Point, ResultDoc};
use crate::runner::run_fbs_shots;
use crate::HarnessError;
use floqsim_fbs::gates::LogicalGate;
use floqsim_fbs::plan::{ExperimentPlan, PlanSpec, StateSpec};

fn round_sweep(cfg: &RunConfig) -> Vec<usize> {
    (1..=cfg.rounds).step_by(cfg.round_step).collect()
}

/// Expected (s, d, joint) signs in the eigenbasis after the included
/// gates, or None when the readout is not the state's own eigenbasis.
fn expected_signs(
    state: &StateSpec,
    setting: (floqsim_core::Pauli, floqsim_core::Pauli),
    gates: &[(usize, LogicalGate)],
) -> Option<(f64, f64, f64)> {
    if setting != (state.s_axis, state.d_axis) {
        return None;
    }
    let mut s = state.s_sign as f64;
    let mut d = state.d_sign as f64;
    for (_, gate) in gates {
        match gate {
            LogicalGate::PauliS(p) if anticommutes(*p, state.s_axis) => s = -s,
            LogicalGate::PauliD(p) if anticommutes(*p, state.d_axis) => d = -d,
            LogicalGate::PauliS(_) | LogicalGate::PauliD(_) => {}
            _ => return None,
        }
    }
    Some((s, d, s * d))
}

fn run_sweep(
    cfg: &RunConfig,
    gates: &[(usize, LogicalGate)],
) -> Result<ResultDoc, HarnessError> {
    let mut doc = ResultDoc::new(cfg)?;
    let rs = round_sweep(cfg);
    let multi = cfg.states.len() > 1;
    let shots_per = split_shots(cfg.shots, cfg.states.len() * rs.len());
    let last_r = *rs.last().expect("rounds >= 1");

    for (si, label) in cfg.states.iter().enumerate() {
        let state = state_of(label)?;
        let setting = setting_axes(cfg, &state)?;
        let name = |part: &str| {
            if multi {
                format!("{label}:{part}")
            } else {
                part.to_string()
            }
        };

        for (ri, &r) in rs.iter().enumerate() {
            let included: Vec<(usize, LogicalGate)> = gates
                .iter()
                .filter(|(round, _)| *round <= r)
                .cloned()
                .collect();
            let expected = expected_signs(&state, setting, &included);
            let spec = PlanSpec {
                state,
                rounds: r,
                gates: included,
                setting,
                lowering: cfg.lowering.to_fbs(),
            };
            let plan = ExperimentPlan::build(spec)?;
            let stream = stream_seed(cfg, (si * rs.len() + ri) as u64);
            let batch = run_fbs_shots(&plan, &cfg.noise, cfg.backend, shots_per, stream)?;

            let parts = [
                ("joint", batch.stats.raw_joint, batch.stats.det_joint, expected.map(|e| e.2)),
                ("s", batch.stats.raw_s, batch.stats.det_s, expected.map(|e| e.0)),
                ("d", batch.stats.raw_d, batch.stats.det_d, expected.map(|e| e.1)),
            ];
            for (part, raw, det, exp) in parts {
                let mut p = Point::new(name(part), r as f64);
                p.raw = Some(raw);
                p.detected = det;
                p.retention = Some(batch.stats.retention);
                p.expected = exp;
                doc.points.push(p);
            }

            if r == last_r {
                for (layer, &count) in batch.fired_by_layer.iter().enumerate() {
                    doc.detection.push(DetectionPoint {
                        series: label.clone(),
                        round: layer,
                        fraction: count as f64 / batch.stats.shots as f64,
                    });
                }
            }
        }

        // decay fits on the joint readout, raw and detected, plus the
        // period-aligned subsample of each when it has enough points.
        // Where a gate sequence flips the expected sign mid-sweep the fit
        // runs on the sign-rectified values.
        for (column, tag) in [(Column::Raw, "raw"), (Column::Detected, "detected")] {
            let series = name("joint");
            let pts: Vec<(f64, f64)> = doc
                .points
                .iter()
                .filter(|p| p.series == series)
                .filter_map(|p| {
                    let y = match column {
                        Column::Raw => p.raw,
                        _ => p.detected,
                    }?;
                    let sign = p.expected.map_or(1.0, f64::signum);
                    Some((p.x, sign * y))
                })
                .collect();
            if pts.len() >= 3 {
                let fit = fit_exp_decay(&pts)?;
                doc.fits.push(NamedFit {
                    series: format!("{series}/{tag}"),
                    fit,
                });
            }
            let sub: Vec<(f64, f64)> = pts
                .iter()
                .copied()
                .filter(|&(r, _)| (r as usize) % 4 == 0)
                .collect();
            if sub.len() >= 3 {
                let fit = fit_exp_decay(&sub)?;
                doc.fits.push(NamedFit {
                    series: format!("{series}/{tag}/mod4"),
                    fit,
                });
            }
        }
    }

    if !multi {
        let eps_raw = doc.fit("joint/raw").and_then(|f| f.param("epsilon"));
        let eps_det = doc.fit("joint/detected").and_then(|f| f.param("epsilon"));
        let retention_last = doc
            .points
            .iter()
            .rev()
            .find(|p| p.series == "joint")
            .and_then(|p| p.retention);
        if let Some(e) = eps_raw {
            doc.summary.insert("epsilon_raw".into(), e);
        }
        if let Some(e) = eps_det {
            doc.summary.insert("epsilon_detected".into(), e);
        }
        let headline = match cfg.post {
            PostKind::Raw => eps_raw,
            _ => eps_det,
        };
        if let Some(e) = headline {
            doc.summary.insert("epsilon".into(), e);
        }
        if let Some(r) = retention_last {
            doc.summary.insert("retention_last".into(), r);
        }
    }
    Ok(doc)
}

pub fn fbs_memory(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    run_sweep(cfg, &[])
}

pub fn pauli_gates(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    let gates = parse_fbs_gates(&cfg.gates)?;
    if gates
        .iter()
        .any(|(_, g)| !matches!(g, LogicalGate::PauliS(_) | LogicalGate::PauliD(_)))
    {
        return Err(HarnessError::Config(
            "pauli-gates accepts transversal Pauli gates only".into(),
        ));
    }
    run_sweep(cfg, &gates)
}
