//! Noiseless oracles for the frame-corrected memory experiments.
//!
//! The dense backend enumerates every measurement branch of the lowered
//! circuits; each leaf must be retained and must evaluate to the encoded
//! eigenvalues exactly. Longer runs are certified shot-by-shot on both
//! backends instead of leaf-by-leaf: every sampled record still has to
//! produce the exact logical values.

use floqsim_core::derive_shot_seed;
use floqsim_fbs::{ExperimentPlan, Lowering, PlanSpec, StateSpec};
use floqsim_tableau::execute_record;
use floqsim_vector::{enumerate_with, sample_record};

const CAP: usize = 1 << 20;

fn check_eval(plan: &ExperimentPlan, eval: &floqsim_fbs::ShotEval, what: &str) {
    let state = plan.spec.state;
    assert!(eval.retained, "{what}: noiseless shot dropped ({} fired)", eval.n_fired);
    assert!(eval.joint_defined, "{what}: joint undefined");
    assert_eq!(eval.joint, state.s_sign * state.d_sign, "{what}: joint");
    if eval.s_defined {
        assert_eq!(eval.s, state.s_sign, "{what}: static");
    }
    if eval.d_defined {
        assert_eq!(eval.d, state.d_sign, "{what}: dynamical");
    }
}

fn enumerate_exactly(state: StateSpec, rounds: usize) {
    let plan = ExperimentPlan::build(PlanSpec::memory(state, rounds, Lowering::Direct)).unwrap();
    let what = format!("{} r{rounds}", state.label());
    let mut total = 0.0;
    let mut mean = 0.0;
    enumerate_with(plan.circuit(), CAP, &mut |p, record, _| {
        let eval = plan.evaluate(record).unwrap();
        check_eval(&plan, &eval, &what);
        total += p;
        mean += p * f64::from(eval.joint);
    })
    .unwrap();
    assert!((total - 1.0).abs() < 1e-9, "{what}: branch probabilities sum to {total}");
    let want = f64::from(state.s_sign * state.d_sign);
    assert!((mean - want).abs() < 1e-9, "{what}: mean joint {mean}");
}

#[test]
fn every_encoded_state_is_preserved_exactly() {
    // all 36 states; the branchiest preparations (static Y and dynamical Y
    // encodings) grow past a million leaves by round 3, so depth beyond two
    // rounds is certified by the fault-tolerant families below plus the
    // sampled twelve-round sweep
    for state in StateSpec::all() {
        for rounds in 1..=2 {
            enumerate_exactly(state, rounds);
        }
    }
}

#[test]
fn fault_tolerant_states_are_preserved_exactly_to_three_rounds() {
    for state in StateSpec::all().into_iter().filter(|s| s.fault_tolerant()) {
        enumerate_exactly(state, 3);
    }
}

#[test]
fn twelve_round_shots_stay_exact_on_both_backends() {
    for (pid, state) in StateSpec::all().into_iter().enumerate() {
        let ancilla =
            ExperimentPlan::build(PlanSpec::memory(state, 12, Lowering::Ancilla)).unwrap();
        for shot in 0..40 {
            let seed = derive_shot_seed(pid as u64, shot);
            let record = execute_record(ancilla.circuit(), seed).unwrap();
            let eval = ancilla.evaluate(&record).unwrap();
            check_eval(&ancilla, &eval, &format!("{} ancilla shot {shot}", state.label()));
        }
        let direct = ExperimentPlan::build(PlanSpec::memory(state, 12, Lowering::Direct)).unwrap();
        for shot in 0..6 {
            let seed = derive_shot_seed(1000 + pid as u64, shot);
            let record = sample_record(direct.circuit(), seed).unwrap();
            let eval = direct.evaluate(&record).unwrap();
            check_eval(&direct, &eval, &format!("{} direct shot {shot}", state.label()));
        }
    }
}

#[test]
fn backends_walk_the_same_random_stream() {
    let state = StateSpec::new(floqsim_core::Pauli::X, 1, floqsim_core::Pauli::Z, 1);
    let plan = ExperimentPlan::build(PlanSpec::memory(state, 2, Lowering::Direct)).unwrap();
    for seed in 0..16 {
        let tab = execute_record(plan.circuit(), seed).unwrap();
        let vec = sample_record(plan.circuit(), seed).unwrap();
        assert_eq!(tab, vec, "seed {seed}");
    }
}
