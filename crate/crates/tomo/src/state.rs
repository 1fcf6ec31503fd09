//! Reconstructed logical states: validated 4x4 density matrices, their
//! Pauli expectation vectors, and the distance/fidelity measures used to
//! compare them.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::basis::{eig4, two_qubit_pauli};
use crate::process::PauliVector;
use crate::TomoError;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Two-logical-qubit density matrix. Construction validates Hermiticity,
/// unit trace, and positive semidefiniteness to 1e-9, so a value of this
/// type is always a physical state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: Matrix4<Complex64>,
}

impl DensityMatrix {
    /// Validates and wraps a matrix. Basis order is |00>, |01>, |10>, |11>
    /// with the static qubit first.
    pub fn new(mat: Matrix4<Complex64>) -> Result<Self, TomoError> {
        let herm_gap = (mat - mat.adjoint()).map(|e| e.norm()).max();
        if herm_gap > 1e-9 {
            return Err(TomoError::InvalidState(format!(
                "not Hermitian (gap {herm_gap:.3e})"
            )));
        }
        let tr = mat.trace();
        if tr.norm() < 1e-12 {
            return Err(TomoError::ZeroTrace);
        }
        if (tr - c(1.0)).norm() > 1e-9 {
            return Err(TomoError::InvalidState(format!("trace {tr} is not 1")));
        }
        let (vals, _) = eig4(&mat);
        if let Some(min) = vals.iter().copied().reduce(f64::min) {
            if min < -1e-9 {
                return Err(TomoError::InvalidState(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(Self { mat })
    }

    /// Pure state from an unnormalized ket.
    pub fn pure(ket: &Vector4<Complex64>) -> Result<Self, TomoError> {
        let n2 = ket.norm_squared();
        if n2 < 1e-24 {
            return Err(TomoError::ZeroTrace);
        }
        let normalized = ket.map(|e| e / c(n2.sqrt()));
        Ok(Self {
            mat: normalized * normalized.adjoint(),
        })
    }

    /// Exact inverse of `pauli_vector`; fails if the reconstruction is not
    /// a physical state.
    pub fn from_pauli_vector(p: &PauliVector) -> Result<Self, TomoError> {
        Self::new(pauli_combination(p.components()))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.mat
    }

    /// Pauli expectations p_ij = Tr(rho sigma_i (x) sigma_j).
    pub fn pauli_vector(&self) -> PauliVector {
        let mut comps = [0.0; 16];
        for (k, slot) in comps.iter_mut().enumerate() {
            let op = two_qubit_pauli(k / 4, k % 4);
            *slot = (self.mat * op).trace().re;
        }
        PauliVector::new(comps)
    }

    /// Overlap Tr(rho rho_ideal) with a pure target.
    pub fn fidelity_to(&self, target: &DensityMatrix) -> f64 {
        debug_assert!(target.purity() > 1.0 - 1e-9, "fidelity target must be pure");
        (self.mat * target.mat).trace().re.clamp(0.0, 1.0)
    }

    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re
    }
}

/// (1/4) sum_ij p_ij sigma_i (x) sigma_j.
pub(crate) fn pauli_combination(p: &[f64; 16]) -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    for (k, &coef) in p.iter().enumerate() {
        m += two_qubit_pauli(k / 4, k % 4).map(|e| e * c(coef * 0.25));
    }
    m
}

/// Projects the Hermitian part of a matrix onto the density-matrix set:
/// clip negative eigenvalues, redistribute the clipped mass over the
/// remainder, renormalize the trace.
pub(crate) fn project_to_state(m: &Matrix4<Complex64>) -> Result<DensityMatrix, TomoError> {
    let (vals, vecs) = eig4(m);
    let mut lams: Vec<f64> = vals.iter().copied().collect();
    let total: f64 = lams.iter().sum();
    if total.abs() < 1e-12 {
        return Err(TomoError::ZeroTrace);
    }
    for l in lams.iter_mut() {
        *l /= total;
    }
    clip_redistribute(&mut lams);
    let sum: f64 = lams.iter().sum();
    let diag = Vector4::from_iterator(lams.iter().map(|&l| c(l / sum)));
    let mat = vecs * Matrix4::from_diagonal(&diag) * vecs.adjoint();
    // Symmetrize away the last bits of floating-point drift.
    let mat = (mat + mat.adjoint()).map(|e| e * c(0.5));
    DensityMatrix::new(mat)
}

/// Smallest-first clipping: zero each eigenvalue that cannot be lifted to
/// zero by sharing the accumulated deficit over the remaining ones, then
/// spread the deficit uniformly. Preserves the total.
fn clip_redistribute(lams: &mut [f64]) {
    let mut order: Vec<usize> = (0..lams.len()).collect();
    order.sort_by(|&a, &b| lams[a].total_cmp(&lams[b]));
    let mut deficit = 0.0;
    for (rank, &idx) in order.iter().enumerate() {
        let remaining = (lams.len() - rank) as f64;
        if lams[idx] + deficit / remaining < 0.0 {
            deficit += lams[idx];
            lams[idx] = 0.0;
        } else {
            let share = deficit / remaining;
            for &j in &order[rank..] {
                lams[j] += share;
            }
            return;
        }
    }
    // Everything clipped: the input summed to ~0, leave the zeros.
}

/// Half the trace norm of rho - sigma.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let (vals, _) = eig4(&(a.matrix() - b.matrix()));
    0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
}

/// Tr(rho rho_ideal) against a pure target.
pub fn state_fidelity(rho: &DensityMatrix, target: &DensityMatrix) -> f64 {
    rho.fidelity_to(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(i: usize, j: usize) -> usize {
        4 * i + j
    }

    #[test]
    fn zero_zero_state_has_the_textbook_pauli_vector() {
        let rho = DensityMatrix::pure(&Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0))).unwrap();
        let p = rho.pauli_vector();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i == 0 || i == 3) && (j == 0 || j == 3) {
                    1.0
                } else {
                    0.0
                };
                assert!((p.components()[idx(i, j)] - want).abs() < 1e-12, "{i}{j}");
            }
        }
    }

    #[test]
    fn bell_state_has_the_textbook_pauli_vector() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&Vector4::new(c(s), c(0.0), c(0.0), c(s))).unwrap();
        let p = rho.pauli_vector();
        assert!((p.components()[idx(1, 1)] - 1.0).abs() < 1e-12);
        assert!((p.components()[idx(2, 2)] + 1.0).abs() < 1e-12);
        assert!((p.components()[idx(3, 3)] - 1.0).abs() < 1e-12);
        assert!((p.components()[idx(0, 0)] - 1.0).abs() < 1e-12);
        assert!((p.components()[idx(1, 3)]).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_state_is_identity_component_only() {
        let rho = DensityMatrix::new(Matrix4::identity().map(|e: Complex64| e * c(0.25))).unwrap();
        let p = rho.pauli_vector();
        assert!((p.components()[0] - 1.0).abs() < 1e-12);
        assert!(p.components()[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn pauli_vector_round_trips_through_reconstruction() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let kets = [
            Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0)),
            Vector4::new(c(s), c(0.0), c(0.0), c(s)),
            Vector4::new(
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(0.5, 0.0),
                Complex64::new(-0.5, 0.0),
            ),
        ];
        for ket in &kets {
            let rho = DensityMatrix::pure(ket).unwrap();
            let p = rho.pauli_vector();
            let back = DensityMatrix::from_pauli_vector(&p).unwrap();
            for (want, got) in p.components().iter().zip(back.pauli_vector().components()) {
                assert!((want - got).abs() < 1e-9);
            }
            assert!(trace_distance(&rho, &back) < 1e-9);
        }
    }

    #[test]
    fn clipping_preserves_the_total_and_kills_negatives() {
        let mut lams = vec![0.5, 0.6, -0.1, 0.0];
        clip_redistribute(&mut lams);
        assert!((lams.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(lams.iter().all(|&l| l >= 0.0));
        assert!((lams[0] - 0.45).abs() < 1e-12);
        assert!((lams[1] - 0.55).abs() < 1e-12);
        assert!(lams[2].abs() < 1e-12 && lams[3].abs() < 1e-12);
    }

    #[test]
    fn projection_fixes_an_unphysical_matrix() {
        let mut m = Matrix4::identity().map(|e: Complex64| e * c(0.3));
        m[(3, 3)] = c(-0.2);
        m[(0, 1)] = Complex64::new(0.05, 0.02);
        m[(1, 0)] = Complex64::new(0.05, -0.02);
        let rho = project_to_state(&m).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        let (vals, _) = eig4(rho.matrix());
        assert!(vals.iter().all(|&v| v > -1e-12));
    }

    #[test]
    fn trace_distance_separates_orthogonal_states() {
        let a = DensityMatrix::pure(&Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0))).unwrap();
        let b = DensityMatrix::pure(&Vector4::new(c(0.0), c(1.0), c(0.0), c(0.0))).unwrap();
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-12);
        assert!(trace_distance(&a, &a) < 1e-12);
        assert!((state_fidelity(&a, &b)).abs() < 1e-12);
        assert!((state_fidelity(&a, &a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        let mut m = Matrix4::identity().map(|e: Complex64| e * c(0.25));
        m[(0, 1)] = c(0.3);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(TomoError::InvalidState(_))
        ));
        assert!(matches!(
            DensityMatrix::new(Matrix4::zeros()),
            Err(TomoError::ZeroTrace)
        ));
        let half = Matrix4::identity().map(|e: Complex64| e * c(0.5));
        assert!(DensityMatrix::new(half).is_err());
    }
}
