//! Continuous logical rotation sweep. The target qubit starts in the
//! rotation's equator state, an `Rz` or `Rx` of each sweep angle is placed
//! after `gate_round`, and the two Bloch components that trace the circle
//! are read out, giving cosine and sine series with a trig fit each.
//!
//! Noiseless runs are evaluated by exact branch enumeration on the vector
//! backend; noisy runs are sampled.

use super::{split_shots, state_of, stream_seed};
use crate::config::{RotationKind, RunConfig};
use crate::fit::fit_trig;
use crate::result::{NamedFit, Point, ResultDoc};
use crate::runner::{enumerate_fbs, run_fbs_shots};
use crate::HarnessError;
use floqsim_core::Pauli;
use floqsim_fbs::gates::LogicalGate;
use floqsim_fbs::plan::{ExperimentPlan, PlanSpec};

const ENUM_CAP: usize = 1 << 20;

pub fn rotation_sweep(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    let mut doc = ResultDoc::new(cfg)?;
    let state = state_of(&cfg.states[0])?;
    let target_d = cfg.target == "d";
    let (start_axis, start_sign) = if target_d {
        (state.d_axis, state.d_sign)
    } else {
        (state.s_axis, state.s_sign)
    };

    // measured axes of the rotated qubit and their ideal response, valid
    // when the start state sits on the rotation's equator
    let equator = match cfg.rotation {
        RotationKind::Rz => Pauli::X,
        RotationKind::Rx => Pauli::Z,
    };
    let s0 = start_sign as f64;
    type Response = fn(f64) -> f64;
    let series: [(Pauli, Response, f64); 2] = match cfg.rotation {
        RotationKind::Rz => [(Pauli::X, f64::cos as Response, s0), (Pauli::Y, f64::sin, s0)],
        RotationKind::Rx => [(Pauli::Z, f64::cos as Response, s0), (Pauli::Y, f64::sin, -s0)],
    };
    let ideal_known = start_axis == equator;

    let gate = |phi: f64| match (cfg.rotation, target_d) {
        (RotationKind::Rz, true) => LogicalGate::RotZd(phi),
        (RotationKind::Rz, false) => LogicalGate::RotZs(phi),
        (RotationKind::Rx, true) => LogicalGate::RotXd(phi),
        (RotationKind::Rx, false) => LogicalGate::RotXs(phi),
    };

    let n = cfg.angle_points;
    let shots_per = split_shots(cfg.shots, 2 * n);

    for (si, &(meas_axis, response, scale)) in series.iter().enumerate() {
        let series_name = format!(
            "{}_{}",
            meas_axis.letter().to_ascii_lowercase(),
            if target_d { 'd' } else { 's' }
        );
        for pi in 0..n {
            let phi = cfg.angle_max * pi as f64 / (n - 1) as f64;
            let setting = if target_d {
                (state.s_axis, meas_axis)
            } else {
                (meas_axis, state.d_axis)
            };
            let spec = PlanSpec {
                state,
                rounds: cfg.rounds,
                gates: vec![(cfg.gate_round, gate(phi))],
                setting,
                lowering: cfg.lowering.to_fbs(),
            };
            let plan = ExperimentPlan::build(spec)?;

            let mut point = Point::new(series_name.clone(), phi);
            if cfg.noise.is_zero() {
                let exact = enumerate_fbs(&plan, ENUM_CAP)?;
                point.raw = Some(if target_d { exact.raw_d } else { exact.raw_s });
                point.detected = if target_d { exact.det_d } else { exact.det_s };
                point.retention = Some(exact.retention);
            } else {
                let stream = stream_seed(cfg, (si * n + pi) as u64);
                let batch =
                    run_fbs_shots(&plan, &cfg.noise, cfg.backend, shots_per, stream)?;
                point.raw = Some(if target_d {
                    batch.stats.raw_d
                } else {
                    batch.stats.raw_s
                });
                point.detected = if target_d {
                    batch.stats.det_d
                } else {
                    batch.stats.det_s
                };
                point.retention = Some(batch.stats.retention);
            }
            if ideal_known {
                point.expected = Some(scale * response(phi));
            }
            doc.points.push(point);
        }

        let pts: Vec<(f64, f64)> = doc
            .points
            .iter()
            .filter(|p| p.series == series_name)
            .map(|p| (p.x, p.detected.or(p.raw).unwrap()))
            .collect();
        let fit = fit_trig(&pts)?;
        doc.summary.insert(
            format!("amplitude_{series_name}"),
            fit.param("amplitude").unwrap_or(0.0),
        );
        doc.fits.push(NamedFit {
            series: series_name,
            fit,
        });
    }

    Ok(doc)
}
