//! Tomography-based experiments: logical state reconstruction of encoded
//! states (`encode-fidelity`), the CNOT Bell-pair benchmark (`cnot-bell`),
//! and full process tomography of the CNOT (`lqpt-cnot`).

use super::{
    ideal_pair_rho, logical_cnot_matrix, lqst_scan, pair_ket, split_shots, state_of, stream_seed,
};
use crate::config::RunConfig;
use crate::result::{Point, ProcessTomo, ResultDoc, StateTomo, TomoSection};
use crate::HarnessError;
use floqsim_fbs::gates::LogicalGate;
use floqsim_fbs::plan::StateSpec;
use floqsim_tomo::{
    ideal_cnot_ptm, lqst, lqpt_options, process_and_gate_fidelity, process_inputs,
    state_fidelity, DensityMatrix, InputState, LqptOptions,
};

pub fn encode_fidelity(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    let mut doc = ResultDoc::new(cfg)?;
    let shots_per = split_shots(cfg.shots, cfg.states.len() * 9);
    let mut states = Vec::new();
    let mut mean_raw = 0.0;
    let mut mean_det = 0.0;

    for (si, label) in cfg.states.iter().enumerate() {
        let state = state_of(label)?;
        let data = lqst_scan(
            cfg,
            state,
            &[],
            cfg.rounds,
            shots_per,
            stream_seed(cfg, si as u64),
        )?;
        let rho_raw = lqst(&data.counts_raw)?;
        let rho_det = lqst(&data.counts_det)?;
        let ideal = ideal_pair_rho(&state)?;
        let f_raw = state_fidelity(&rho_raw, &ideal);
        let f_det = state_fidelity(&rho_det, &ideal);
        mean_raw += f_raw / cfg.states.len() as f64;
        mean_det += f_det / cfg.states.len() as f64;

        let mut p = Point::new(label.clone(), si as f64);
        p.raw = Some(f_raw);
        p.detected = Some(f_det);
        p.retention = Some(data.retention);
        doc.points.push(p);
        states.push(StateTomo {
            label: label.clone(),
            fidelity_raw: f_raw,
            fidelity_detected: f_det,
            retention: data.retention,
            counts_raw: data.counts_raw,
            counts_detected: data.counts_det,
        });
    }

    doc.summary.insert("mean_fidelity_raw".into(), mean_raw);
    doc.summary.insert("mean_fidelity_detected".into(), mean_det);
    doc.tomography = Some(TomoSection {
        states,
        process: None,
    });
    Ok(doc)
}

/// Three-correlator Bell fidelity (1 + <XX> - <YY> + <ZZ>) / 4.
fn correlator_fidelity(xx: f64, yy: f64, zz: f64) -> f64 {
    (1.0 + xx - yy + zz) / 4.0
}

pub fn cnot_bell(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    let mut doc = ResultDoc::new(cfg)?;
    let state = state_of(&cfg.states[0])?;
    let gates = vec![(cfg.gate_round, LogicalGate::CnotSD)];
    let shots_per = split_shots(cfg.shots, 9);
    let data = lqst_scan(cfg, state, &gates, cfg.rounds, shots_per, stream_seed(cfg, 0))?;

    let rho_raw = lqst(&data.counts_raw)?;
    let rho_det = lqst(&data.counts_det)?;
    let ideal_ket = logical_cnot_matrix() * pair_ket(&state);
    let ideal = DensityMatrix::pure(&ideal_ket)?;
    let f_lqst_raw = state_fidelity(&rho_raw, &ideal);
    let f_lqst_det = state_fidelity(&rho_det, &ideal);

    // the Bell correlators come straight from the matching basis scans
    let mut raw3 = [0.0; 3];
    let mut det3 = [0.0; 3];
    for (i, (key, exp)) in [("XX", 1.0), ("YY", -1.0), ("ZZ", 1.0)].iter().enumerate() {
        let stats = &data.stats[*key];
        raw3[i] = stats.raw_joint;
        det3[i] = stats.det_joint.unwrap_or(stats.raw_joint);
        let mut p = Point::new(*key, 0.0);
        p.raw = Some(stats.raw_joint);
        p.detected = stats.det_joint;
        p.retention = Some(stats.retention);
        p.expected = Some(*exp);
        doc.points.push(p);
    }
    let f_raw = correlator_fidelity(raw3[0], raw3[1], raw3[2]);
    let f_det = correlator_fidelity(det3[0], det3[1], det3[2]);

    doc.summary.insert("bell_fidelity_raw".into(), f_raw);
    doc.summary.insert("bell_fidelity_detected".into(), f_det);
    doc.summary.insert("bell_fidelity_lqst_raw".into(), f_lqst_raw);
    doc.summary
        .insert("bell_fidelity_lqst_detected".into(), f_lqst_det);
    doc.summary.insert("retention".into(), data.retention);
    doc.tomography = Some(TomoSection {
        states: vec![StateTomo {
            label: "bell".into(),
            fidelity_raw: f_lqst_raw,
            fidelity_detected: f_lqst_det,
            retention: data.retention,
            counts_raw: data.counts_raw,
            counts_detected: data.counts_det,
        }],
        process: None,
    });
    Ok(doc)
}

fn input_label(s: InputState) -> &'static str {
    match s {
        InputState::Zero => "z+",
        InputState::One => "z-",
        InputState::Minus => "x-",
        InputState::MinusI => "y-",
    }
}

pub fn lqpt_cnot(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
    let mut doc = ResultDoc::new(cfg)?;
    let inputs = process_inputs();
    let shots_per = split_shots(cfg.shots, inputs.len() * 2 * 9);
    let gates = vec![(cfg.gate_round, LogicalGate::CnotSD)];

    let mut pairs = Vec::with_capacity(16);
    let mut input_fidelities = std::collections::BTreeMap::new();
    for (k, &(s_in, d_in)) in inputs.iter().enumerate() {
        let label = format!("{}{}", input_label(s_in), input_label(d_in));
        let state = StateSpec::from_label(&label)?;

        // input side: stabilize up to the gate round, no gate
        let data_in = lqst_scan(
            cfg,
            state,
            &[],
            cfg.gate_round,
            shots_per,
            stream_seed(cfg, 2 * k as u64),
        )?;
        let rho_in = lqst(&data_in.counts_det)?;
        let ideal_in = ideal_pair_rho(&state)?;
        input_fidelities.insert(label.clone(), state_fidelity(&rho_in, &ideal_in));

        // output side: full depth with the CNOT in place
        let data_out = lqst_scan(
            cfg,
            state,
            &gates,
            cfg.rounds,
            shots_per,
            stream_seed(cfg, 2 * k as u64 + 1),
        )?;
        let rho_out = lqst(&data_out.counts_det)?;

        pairs.push((rho_in.pauli_vector(), rho_out.pauli_vector()));
    }

    let r_exp = lqpt_options(
        &pairs,
        LqptOptions {
            enforce_cptp: cfg.cptp,
        },
    )?;
    let (f_p, f_g) = process_and_gate_fidelity(&r_exp, &ideal_cnot_ptm());

    doc.summary.insert("process_fidelity".into(), f_p);
    doc.summary.insert("gate_fidelity".into(), f_g);
    let matrix: Vec<Vec<f64>> = (0..16)
        .map(|i| (0..16).map(|j| r_exp.entry(i, j)).collect())
        .collect();
    doc.tomography = Some(TomoSection {
        states: Vec::new(),
        process: Some(ProcessTomo {
            f_p,
            f_g,
            input_fidelities,
            matrix,
        }),
    });
    Ok(doc)
}
