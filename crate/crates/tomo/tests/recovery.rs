//! Reconstruction oracles: sampled state recovery, analytic process
//! recovery, and invariant preservation under hostile inputs.

use nalgebra::{Matrix4, SMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use floqsim_tomo::{
    basis_label, lqpt, lqst, process_and_gate_fidelity, process_inputs, ptm_from_unitary,
    slot_of, trace_distance, BasisCounts, DensityMatrix, PauliVector, TransferMatrix,
    BASIS_AXES,
};

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn random_complex_matrix(rng: &mut ChaCha8Rng) -> Matrix4<Complex64> {
    Matrix4::from_fn(|_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

/// Full-rank random density matrix (normalized Wishart).
fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = random_complex_matrix(rng);
    let w = g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(w.map(|e| e / Complex64::new(tr, 0.0))).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Matrix4<Complex64> {
    random_complex_matrix(rng).qr().q()
}

/// Multinomial histograms for every basis, sampled from the exact outcome
/// distribution of the state.
fn sampled_counts(rho: &DensityMatrix, shots: usize, rng: &mut ChaCha8Rng) -> BasisCounts {
    let pv = rho.pauli_vector();
    let mut counts = BasisCounts::new();
    for &a in &BASIS_AXES {
        for &b in &BASIS_AXES {
            let mut probs = [0.0f64; 4];
            for s in [-1i8, 1] {
                for d in [-1i8, 1] {
                    let joint = 1.0
                        + f64::from(s) * pv.component(a, 0)
                        + f64::from(d) * pv.component(0, b)
                        + f64::from(s) * f64::from(d) * pv.component(a, b);
                    probs[slot_of(s, d)] = (joint / 4.0).max(0.0);
                }
            }
            let mut hist = [0u64; 4];
            for _ in 0..shots {
                let mut u: f64 = rng.gen_range(0.0..1.0);
                let mut k = 3;
                for (slot, &p) in probs.iter().enumerate() {
                    if u < p {
                        k = slot;
                        break;
                    }
                    u -= p;
                }
                hist[k] += 1;
            }
            counts.insert(basis_label(a, b), hist);
        }
    }
    counts
}

#[test]
fn sampled_statistics_recover_random_states_closely() {
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(41 + seed);
        let rho = random_state(&mut rng);
        let counts = sampled_counts(&rho, 100_000, &mut rng);
        let got = lqst(&counts).unwrap();
        let dist = trace_distance(&got, &rho);
        assert!(dist <= 0.02, "seed {seed}: trace distance {dist}");
    }
}

#[test]
fn reconstruction_survives_pure_noise_histograms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let mut counts = BasisCounts::new();
        for &a in &BASIS_AXES {
            for &b in &BASIS_AXES {
                let hist = [
                    rng.gen_range(0..50u64),
                    rng.gen_range(0..50u64),
                    rng.gen_range(0..50u64),
                    rng.gen_range(1..50u64),
                ];
                counts.insert(basis_label(a, b), hist);
            }
        }
        let rho = lqst(&counts).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-9);
        assert!(rho.purity() <= 1.0 + 1e-9);
    }
}

#[test]
fn analytic_channels_are_recovered_to_eight_digits() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for trial in 0..4 {
        // Convex mixture of two unitary conjugations: a CPTP map whose
        // transfer matrix we know exactly.
        let ra = ptm_from_unitary(&random_unitary(&mut rng));
        let rb = ptm_from_unitary(&random_unitary(&mut rng));
        let w: f64 = rng.gen_range(0.2..0.8);
        let truth =
            TransferMatrix::from_matrix(ra.matrix() * w + rb.matrix() * (1.0 - w));
        let pairs: Vec<(PauliVector, PauliVector)> = process_inputs()
            .iter()
            .map(|&(a, b)| {
                let input = PauliVector::kron(a.pauli_components(), b.pauli_components());
                let output = truth.apply(&input);
                (input, output)
            })
            .collect();
        let got = lqpt(&pairs).unwrap();
        let gap = (got.matrix() - truth.matrix()).abs().max();
        assert!(gap < 1e-8, "trial {trial}: max deviation {gap}");
    }
}

#[test]
fn unitary_transfer_matrices_have_unit_self_fidelity() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..5 {
        let r = ptm_from_unitary(&random_unitary(&mut rng));
        let (fp, fg) = process_and_gate_fidelity(&r, &r);
        assert!((fp - 1.0).abs() < 1e-10);
        assert!((fg - 1.0).abs() < 1e-10);
        let e = r.matrix();
        let mut first = SMatrix::<f64, 16, 16>::zeros();
        first.copy_from(e);
        assert!((first[(0, 0)] - 1.0).abs() < 1e-10);
        for j in 1..16 {
            assert!(first[(0, j)].abs() < 1e-10);
        }
    }
}
