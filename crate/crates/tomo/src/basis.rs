//! Pauli operator basis for two logical qubits and small Hermitian
//! eigendecomposition helpers shared by the reconstruction routines.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

/// Single-qubit Pauli labels in component order.
pub const PAULI_LABELS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Measured axes in canonical enumeration order (indices into
/// `PAULI_LABELS`): Z, X, Y. The nine tomography bases are the pairs of
/// these, first letter on the static qubit.
pub const BASIS_AXES: [usize; 3] = [3, 1, 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit Pauli matrix for a component index.
pub(crate) fn sigma(i: usize) -> Matrix2<Complex64> {
    match i {
        0 => Matrix2::identity(),
        1 => Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        2 => Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        3 => Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
        _ => panic!("pauli index {i} out of range"),
    }
}

/// Two-qubit Pauli sigma_i (x) sigma_j, first factor the static qubit.
pub fn two_qubit_pauli(i: usize, j: usize) -> Matrix4<Complex64> {
    sigma(i).kronecker(&sigma(j))
}

/// Basis label such as "XZ" from two component indices.
pub fn basis_label(a: usize, b: usize) -> String {
    format!("{}{}", PAULI_LABELS[a], PAULI_LABELS[b])
}

pub(crate) fn axis_from_char(ch: char) -> Option<usize> {
    match ch {
        'X' => Some(1),
        'Y' => Some(2),
        'Z' => Some(3),
        _ => None,
    }
}

/// Projector onto the (s, d) outcome of a joint measurement along axes
/// (a, b): (I + s sigma_a)/2 (x) (I + d sigma_b)/2.
pub(crate) fn outcome_projector(a: usize, b: usize, s: i8, d: i8) -> Matrix4<Complex64> {
    let half = c(0.5, 0.0);
    let ps = (Matrix2::identity() + sigma(a).map(|e| e * f64::from(s))).map(|e| e * half);
    let pd = (Matrix2::identity() + sigma(b).map(|e| e * f64::from(d))).map(|e| e * half);
    ps.kronecker(&pd)
}

/// Eigendecomposition of the Hermitian part of a 4x4 complex matrix.
/// Returns real eigenvalues and unitary eigenvector columns.
pub(crate) fn eig4(m: &Matrix4<Complex64>) -> (Vector4<f64>, Matrix4<Complex64>) {
    let herm = (m + m.adjoint()).map(|e| e * c(0.5, 0.0));
    let se = SymmetricEigen::new(herm);
    (se.eigenvalues, se.eigenvectors)
}

/// Same for a dynamically sized Hermitian matrix (used for Choi matrices).
pub(crate) fn eig_dyn(m: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let herm = (m + m.adjoint()).map(|e| e * c(0.5, 0.0));
    let se = SymmetricEigen::new(herm);
    (se.eigenvalues, se.eigenvectors)
}
