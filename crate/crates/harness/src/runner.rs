//! Shot execution and aggregation.
//!
//! Every sampled run derives per-shot seeds as
//! `derive_shot_seed(stream_seed, shot)`, where `stream_seed` is itself
//! derived from the master seed and a stream index. Two runs on the same
//! stream therefore see identical randomness per shot regardless of the
//! experiment that wraps them, which is what the budget gradients rely on
//! (common random numbers), and results are independent of thread count
//! because shots are collected in index order before any reduction.

use crate::config::BackendKind;
use crate::HarnessError;
use floqsim_core::{derive_shot_seed, Circuit, MeasRecord};
use floqsim_fbs::bs::{BsPlan, BsShot};
use floqsim_fbs::frame::OutcomeBits;
use floqsim_fbs::plan::{ExperimentPlan, ShotEval};
use floqsim_noise::{instrument, NoiseModel};
use floqsim_tomo::slot_of;
use rayon::prelude::*;

/// Sample `shots` records of `circuit` and map each through `f`, in shot
/// order.
pub fn sample_map<T, F>(
    circuit: &Circuit,
    backend: BackendKind,
    shots: u64,
    stream_seed: u64,
    f: F,
) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(&MeasRecord) -> Result<T, HarnessError> + Sync,
{
    (0..shots)
        .into_par_iter()
        .map(|shot| {
            let seed = derive_shot_seed(stream_seed, shot);
            let record = match backend {
                BackendKind::Tableau => floqsim_tableau::execute_record(circuit, seed)?,
                BackendKind::Vector => floqsim_vector::sample_record(circuit, seed)?,
            };
            f(&record)
        })
        .collect()
}

/// Detector layer index per detector: 0 is the encoding consistency
/// layer, `1..=rounds` the stabilization rounds, `rounds + 1` the final
/// data-derived layer.
pub fn detector_layers(plan: &ExperimentPlan) -> Vec<usize> {
    let last = plan.spec.rounds + 1;
    plan.detectors
        .iter()
        .map(|d| {
            if let Some(rest) = d.label.strip_prefix("det:r") {
                rest.split(':')
                    .next()
                    .and_then(|n| n.parse::<usize>().ok())
                    .unwrap_or(last)
            } else if d.label.starts_with("det:data:") {
                last
            } else {
                // encoding consistency detectors ("enc0:det:...")
                0
            }
        })
        .collect()
}

/// Aggregated statistics of one Floquet-mode series.
#[derive(Debug, Clone, Copy)]
pub struct SeriesStats {
    pub shots: u64,
    pub retained: u64,
    pub retention: f64,
    pub raw_s: f64,
    pub raw_d: f64,
    pub raw_joint: f64,
    pub det_s: Option<f64>,
    pub det_d: Option<f64>,
    pub det_joint: Option<f64>,
}

pub fn stats_of<'a>(evals: impl Iterator<Item = &'a ShotEval> + Clone) -> SeriesStats {
    let mut shots = 0u64;
    let mut retained = 0u64;
    let mut raw = [0i64; 3];
    let mut det = [0i64; 3];
    for e in evals {
        shots += 1;
        raw[0] += e.s as i64;
        raw[1] += e.d as i64;
        raw[2] += e.joint as i64;
        if e.retained {
            retained += 1;
            det[0] += e.s as i64;
            det[1] += e.d as i64;
            det[2] += e.joint as i64;
        }
    }
    let mean = |sum: i64, n: u64| sum as f64 / n as f64;
    let det_mean = |sum: i64| (retained > 0).then(|| mean(sum, retained));
    SeriesStats {
        shots,
        retained,
        retention: if shots > 0 {
            retained as f64 / shots as f64
        } else {
            0.0
        },
        raw_s: mean(raw[0], shots),
        raw_d: mean(raw[1], shots),
        raw_joint: mean(raw[2], shots),
        det_s: det_mean(det[0]),
        det_d: det_mean(det[1]),
        det_joint: det_mean(det[2]),
    }
}

/// One sampled Floquet-mode batch.
#[derive(Debug, Clone)]
pub struct FbsBatch {
    pub stats: SeriesStats,
    /// Two-outcome histogram over (s, d) signs, all shots.
    pub hist_raw: [u64; 4],
    /// Same, shots with no fired detector only.
    pub hist_detected: [u64; 4],
    /// Shots in which at least one detector of each layer fired.
    pub fired_by_layer: Vec<u64>,
}

pub fn run_fbs_shots(
    plan: &ExperimentPlan,
    model: &NoiseModel,
    backend: BackendKind,
    shots: u64,
    stream_seed: u64,
) -> Result<FbsBatch, HarnessError> {
    let noisy = instrument(plan.circuit(), model)?;
    let layers = detector_layers(plan);
    let n_layers = plan.spec.rounds + 2;
    let evals = sample_map(&noisy, backend, shots, stream_seed, |record| {
        let eval = plan.evaluate(record)?;
        let bits = OutcomeBits::from_record(record)?;
        let mut fired = 0u64;
        for (det, &layer) in plan.detectors.iter().zip(&layers) {
            if det.value.eval(&bits) < 0 {
                fired |= 1u64 << (layer as u32).min(63);
            }
        }
        Ok((eval, fired))
    })?;

    let stats = stats_of(evals.iter().map(|(e, _)| e));
    let mut hist_raw = [0u64; 4];
    let mut hist_detected = [0u64; 4];
    let mut fired_by_layer = vec![0u64; n_layers];
    for (e, fired) in &evals {
        let slot = slot_of(e.s, e.d);
        hist_raw[slot] += 1;
        if e.retained {
            hist_detected[slot] += 1;
        }
        for (layer, count) in fired_by_layer.iter_mut().enumerate() {
            if fired & (1u64 << (layer as u32).min(63)) != 0 {
                *count += 1;
            }
        }
    }
    Ok(FbsBatch {
        stats,
        hist_raw,
        hist_detected,
        fired_by_layer,
    })
}

/// Exact probability-weighted statistics of a noiseless Floquet plan,
/// from full branch enumeration on the vector backend.
#[derive(Debug, Clone)]
pub struct ExactStats {
    pub retention: f64,
    pub raw_s: f64,
    pub raw_d: f64,
    pub raw_joint: f64,
    pub det_s: Option<f64>,
    pub det_d: Option<f64>,
    pub det_joint: Option<f64>,
}

pub fn enumerate_fbs(plan: &ExperimentPlan, branch_cap: usize) -> Result<ExactStats, HarnessError> {
    let mut failed: Option<HarnessError> = None;
    let mut p_total = 0.0f64;
    let mut p_ret = 0.0f64;
    let mut raw = [0.0f64; 3];
    let mut det = [0.0f64; 3];
    floqsim_vector::enumerate_with(plan.circuit(), branch_cap, &mut |p, record, _| {
        if failed.is_some() {
            return;
        }
        match plan.evaluate(record) {
            Ok(e) => {
                p_total += p;
                raw[0] += p * e.s as f64;
                raw[1] += p * e.d as f64;
                raw[2] += p * e.joint as f64;
                if e.retained {
                    p_ret += p;
                    det[0] += p * e.s as f64;
                    det[1] += p * e.d as f64;
                    det[2] += p * e.joint as f64;
                }
            }
            Err(e) => failed = Some(e.into()),
        }
    })?;
    if let Some(e) = failed {
        return Err(e);
    }
    if p_total <= 0.0 {
        return Err(HarnessError::Sim("enumeration covered zero probability".into()));
    }
    let det_mean = |sum: f64| (p_ret > 0.0).then(|| sum / p_ret);
    Ok(ExactStats {
        retention: p_ret / p_total,
        raw_s: raw[0] / p_total,
        raw_d: raw[1] / p_total,
        raw_joint: raw[2] / p_total,
        det_s: det_mean(det[0]),
        det_d: det_mean(det[1]),
        det_joint: det_mean(det[2]),
    })
}

/// One sampled static-mode batch.
#[derive(Debug, Clone)]
pub struct BsBatch {
    pub shots: u64,
    pub retained: u64,
    pub retention: f64,
    pub raw_mean: f64,
    pub corrected_mean: f64,
    pub detected_mean: Option<f64>,
    /// Shots in which at least one detector of each round fired, indexed
    /// by detector round.
    pub fired_by_round: Vec<u64>,
}

pub fn run_bs_shots(
    plan: &BsPlan,
    model: &NoiseModel,
    backend: BackendKind,
    shots: u64,
    stream_seed: u64,
) -> Result<BsBatch, HarnessError> {
    let noisy = instrument(plan.circuit(), model)?;
    let n_rounds = plan
        .detectors
        .iter()
        .map(|d| d.round + 1)
        .max()
        .unwrap_or(0);
    let evals: Vec<(BsShot, u64)> = sample_map(&noisy, backend, shots, stream_seed, |record| {
        let shot = plan.evaluate(record)?;
        let bits = OutcomeBits::from_record(record)?;
        let mut fired = 0u64;
        for det in &plan.detectors {
            if det.value.eval(&bits) < 0 {
                fired |= 1u64 << (det.round as u32).min(63);
            }
        }
        Ok((shot, fired))
    })?;

    let mut retained = 0u64;
    let mut raw_sum = 0i64;
    let mut corr_sum = 0i64;
    let mut det_sum = 0i64;
    let mut fired_by_round = vec![0u64; n_rounds];
    for (shot, fired) in &evals {
        raw_sum += shot.raw as i64;
        corr_sum += shot.corrected as i64;
        if shot.retained {
            retained += 1;
            det_sum += shot.raw as i64;
        }
        for (round, count) in fired_by_round.iter_mut().enumerate() {
            if fired & (1u64 << (round as u32).min(63)) != 0 {
                *count += 1;
            }
        }
    }
    Ok(BsBatch {
        shots,
        retained,
        retention: retained as f64 / shots as f64,
        raw_mean: raw_sum as f64 / shots as f64,
        corrected_mean: corr_sum as f64 / shots as f64,
        detected_mean: (retained > 0).then(|| det_sum as f64 / retained as f64),
        fired_by_round,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use floqsim_fbs::lower::Lowering;
    use floqsim_fbs::plan::{PlanSpec, StateSpec};

    fn small_plan(lowering: Lowering) -> ExperimentPlan {
        let state = StateSpec::from_label("x+z+").unwrap();
        ExperimentPlan::build(PlanSpec::memory(state, 2, lowering)).unwrap()
    }

    #[test]
    fn noiseless_shots_are_perfect_on_both_backends() {
        for (lowering, backend) in [
            (Lowering::Ancilla, BackendKind::Tableau),
            (Lowering::Direct, BackendKind::Vector),
        ] {
            let plan = small_plan(lowering);
            let batch =
                run_fbs_shots(&plan, &NoiseModel::zero(), backend, 64, 7).unwrap();
            assert_eq!(batch.stats.retained, 64);
            assert_eq!(batch.stats.raw_joint, 1.0);
            assert_eq!(batch.stats.det_joint, Some(1.0));
            assert!(batch.fired_by_layer.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn shot_streams_are_reproducible_and_independent() {
        let plan = small_plan(Lowering::Ancilla);
        let model = NoiseModel::default();
        let a = run_fbs_shots(&plan, &model, BackendKind::Tableau, 200, 3).unwrap();
        let b = run_fbs_shots(&plan, &model, BackendKind::Tableau, 200, 3).unwrap();
        let c = run_fbs_shots(&plan, &model, BackendKind::Tableau, 200, 4).unwrap();
        assert_eq!(a.hist_raw, b.hist_raw);
        assert_eq!(a.stats.retained, b.stats.retained);
        assert_ne!(a.hist_raw, c.hist_raw);
    }

    #[test]
    fn detector_layers_split_encoding_rounds_and_final() {
        let plan = small_plan(Lowering::Ancilla);
        let layers = detector_layers(&plan);
        assert_eq!(layers.len(), plan.detectors.len());
        let max_layer = plan.spec.rounds + 1;
        assert!(layers.iter().any(|&l| l == max_layer));
        assert!(layers.iter().all(|&l| l <= max_layer));
    }

    #[test]
    fn enumeration_matches_sampling_on_a_noiseless_plan() {
        let plan = small_plan(Lowering::Direct);
        let exact = enumerate_fbs(&plan, 1 << 14).unwrap();
        assert!((exact.retention - 1.0).abs() < 1e-12);
        assert!((exact.raw_joint - 1.0).abs() < 1e-12);
        assert_eq!(exact.det_joint, Some(1.0));
    }
}
