//! Static-mode experiments: memory under integrated stabilization
//! (`bs-memory`, with matching-based correction) and transversal logical
//! gate sequences (`bs-gates`).

use super::{split_shots, stream_seed};
use crate::config::{parse_bs_gates, PostKind, RunConfig};
use crate::fit::fit_exp_decay;
use crate::result::{DetectionPoint, NamedFit, Point, ResultDoc};
use crate::runner::run_bs_shots;
use crate::HarnessError;
use floqsim_fbs::bs::{BsGate, BsPlan, BsSpec, BsState};
use floqsim_fbs::lower::Lowering;

fn state_of(label: &str) -> Result<BsState, HarnessError> {
    BsState::from_label(label).map_err(|e| HarnessError::Config(e.to_string()))
}

fn run_sweep(cfg: &RunConfig, gates: &[(usize, BsGate)]) -> Result<ResultDoc, HarnessError> {
    let mut doc = ResultDoc::new(cfg)?;
    let rs: Vec<usize> = (1..=cfg.rounds).step_by(cfg.round_step).collect();
    let last_r = *rs.last().expect("rounds >= 1");
    let multi = cfg.states.len() > 1;
    let shots_per = split_shots(cfg.shots, cfg.states.len() * rs.len());
    let lowering: Lowering = cfg.lowering.to_fbs();

    for (si, label) in cfg.states.iter().enumerate() {
        let state = state_of(label)?;
        let series = if multi {
            label.clone()
        } else {
            "readout".to_string()
        };

        for (ri, &r) in rs.iter().enumerate() {
            let included: Vec<(usize, BsGate)> = gates
                .iter()
                .filter(|(round, _)| *round <= r)
                .cloned()
                .collect();
            let spec = BsSpec {
                state,
                rounds: r,
                gates: included,
                lowering,
            };
            let plan = BsPlan::build(spec)?;
            let expected = plan.expected as f64;
            let stream = stream_seed(cfg, (si * rs.len() + ri) as u64);
            let batch = run_bs_shots(&plan, &cfg.noise, cfg.backend, shots_per, stream)?;

            let mut p = Point::new(series.clone(), r as f64);
            p.raw = Some(batch.raw_mean);
            p.detected = batch.detected_mean;
            p.corrected = Some(batch.corrected_mean);
            p.retention = Some(batch.retention);
            p.expected = Some(expected);
            doc.points.push(p);

            if r == last_r {
                for (round, &count) in batch.fired_by_round.iter().enumerate() {
                    doc.detection.push(DetectionPoint {
                        series: label.clone(),
                        round,
                        fraction: count as f64 / batch.shots as f64,
                    });
                }
            }
        }

        // rectified decay fits for each view
        for tag in ["raw", "corrected", "detected"] {
            let pts: Vec<(f64, f64)> = doc
                .points
                .iter()
                .filter(|p| p.series == series)
                .filter_map(|p| {
                    let y = match tag {
                        "raw" => p.raw,
                        "corrected" => p.corrected,
                        _ => p.detected,
                    }?;
                    Some((p.x, p.expected.map_or(1.0, f64::signum) * y))
                })
                .collect();
            if pts.len() >= 3 {
                let fit = fit_exp_decay(&pts)?;
                doc.fits.push(NamedFit {
                    series: format!("{series}/{tag}"),
                    fit,
                });
            }
        }
    }

    if !multi {
        let eps_of = |doc: &ResultDoc, tag: &str| {
            doc.fit(&format!("readout/{tag}"))
                .and_then(|f| f.param("epsilon"))
        };
        let by_tag: Vec<(&str, Option<f64>)> = ["raw", "corrected", "detected"]
            .into_iter()
            .map(|tag| (tag, eps_of(&doc, tag)))
            .collect();
        for (tag, eps) in &by_tag {
            if let Some(e) = eps {
                doc.summary.insert(format!("epsilon_{tag}"), *e);
            }
        }
        let pick = |tag: &str| by_tag.iter().find(|(t, _)| *t == tag).and_then(|(_, e)| *e);
        let headline = match cfg.post {
            PostKind::Raw => pick("raw"),
            PostKind::Detect => pick("detected"),
            PostKind::Correct => pick("corrected"),
        };
        if let Some(e) = headline {
            doc.summary.insert("epsilon".into(), e);
        }
    }
    Ok(doc)
}

pub fn bs_memory(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    run_sweep(cfg, &[])
}

pub fn bs_gates(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    let gates = parse_bs_gates(&cfg.gates)?;
    run_sweep(cfg, &gates)
}
