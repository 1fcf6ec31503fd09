//! Pauli transfer matrices and logical process tomography.

use nalgebra::{DMatrix, Matrix4, SMatrix, SVector};
use num_complex::Complex64;

use crate::basis::{eig_dyn, two_qubit_pauli};
use crate::TomoError;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// 16 real Pauli expectations of a two-qubit state, component order
/// (I,X,Y,Z) x (I,X,Y,Z) with the static qubit first: index 4i + j.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliVector([f64; 16]);

impl PauliVector {
    pub fn new(components: [f64; 16]) -> Self {
        debug_assert!((components[0] - 1.0).abs() < 1e-6, "identity component must be 1");
        Self(components)
    }

    /// Product vector of two single-qubit component quadruples.
    pub fn kron(a: [f64; 4], b: [f64; 4]) -> Self {
        let mut comps = [0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                comps[4 * i + j] = a[i] * b[j];
            }
        }
        Self::new(comps)
    }

    pub fn components(&self) -> &[f64; 16] {
        &self.0
    }

    pub fn component(&self, i: usize, j: usize) -> f64 {
        self.0[4 * i + j]
    }
}

/// Single-qubit preparations whose 16 pairwise products form the process
/// tomography input set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputState {
    Zero,
    One,
    Minus,
    MinusI,
}

impl InputState {
    pub const ALL: [InputState; 4] = [
        InputState::Zero,
        InputState::One,
        InputState::Minus,
        InputState::MinusI,
    ];

    /// Ideal (I, X, Y, Z) expectations.
    pub fn pauli_components(self) -> [f64; 4] {
        match self {
            InputState::Zero => [1.0, 0.0, 0.0, 1.0],
            InputState::One => [1.0, 0.0, 0.0, -1.0],
            InputState::Minus => [1.0, -1.0, 0.0, 0.0],
            InputState::MinusI => [1.0, 0.0, -1.0, 0.0],
        }
    }
}

/// The 16 (static, dynamical) input preparations in canonical order.
pub fn process_inputs() -> [(InputState, InputState); 16] {
    let mut out = [(InputState::Zero, InputState::Zero); 16];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = (InputState::ALL[k / 4], InputState::ALL[k % 4]);
    }
    out
}

/// 16x16 real Pauli transfer matrix: output vector = R . input vector.
/// Trace-preserving maps have first row (1, 0, ..., 0).
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix(SMatrix<f64, 16, 16>);

impl TransferMatrix {
    pub fn from_matrix(m: SMatrix<f64, 16, 16>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(SMatrix::identity())
    }

    pub fn matrix(&self) -> &SMatrix<f64, 16, 16> {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn apply(&self, p: &PauliVector) -> PauliVector {
        let v = self.0 * SVector::<f64, 16>::from_row_slice(p.components());
        let mut comps = [0.0; 16];
        comps.copy_from_slice(v.as_slice());
        PauliVector::new(comps)
    }
}

/// Transfer matrix of conjugation by a two-qubit unitary:
/// R_ij = Tr(sigma_i U sigma_j U^dag) / 4.
pub fn ptm_from_unitary(u: &Matrix4<Complex64>) -> TransferMatrix {
    let udag = u.adjoint();
    let mut r = SMatrix::<f64, 16, 16>::zeros();
    for j in 0..16 {
        let moved = u * two_qubit_pauli(j / 4, j % 4) * udag;
        for i in 0..16 {
            r[(i, j)] = (two_qubit_pauli(i / 4, i % 4) * moved).trace().re / 4.0;
        }
    }
    TransferMatrix(r)
}

/// Ideal logical CNOT (static control, dynamical target).
pub fn ideal_cnot_ptm() -> TransferMatrix {
    let mut u = Matrix4::zeros();
    u[(0, 0)] = c(1.0);
    u[(1, 1)] = c(1.0);
    u[(2, 3)] = c(1.0);
    u[(3, 2)] = c(1.0);
    ptm_from_unitary(&u)
}

/// Ideal identity channel.
pub fn ideal_identity_ptm() -> TransferMatrix {
    TransferMatrix::identity()
}

/// Options for `lqpt_options`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LqptOptions {
    /// Additionally project the reconstruction onto the completely
    /// positive cone (alternating Choi clipping). Default enforces trace
    /// preservation and entry bounds only.
    pub enforce_cptp: bool,
}

/// Process tomography from 16 characterized input states and their
/// measured outputs: least-squares solve of output = R . input, then
/// trace-preservation row and entry clipping.
pub fn lqpt(pairs: &[(PauliVector, PauliVector)]) -> Result<TransferMatrix, TomoError> {
    lqpt_options(pairs, LqptOptions::default())
}

pub fn lqpt_options(
    pairs: &[(PauliVector, PauliVector)],
    options: LqptOptions,
) -> Result<TransferMatrix, TomoError> {
    if pairs.len() != 16 {
        return Err(TomoError::WrongPairCount(pairs.len()));
    }
    let mut s = SMatrix::<f64, 16, 16>::zeros();
    let mut t = SMatrix::<f64, 16, 16>::zeros();
    for (k, (input, output)) in pairs.iter().enumerate() {
        for row in 0..16 {
            s[(row, k)] = input.components()[row];
            t[(row, k)] = output.components()[row];
        }
    }
    let svd = s.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= smax * 1e-9 {
        let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        return Err(TomoError::RankDeficient { cond });
    }
    // R S = T  <=>  S^T R^T = T^T, solved column by column in least squares.
    let st_svd = s.transpose().svd(true, true);
    let rt = st_svd
        .solve(&t.transpose(), 1e-12)
        .map_err(|_| TomoError::EigenFailure)?;
    let mut r = rt.transpose();
    project_tp(&mut r);
    if options.enforce_cptp {
        r = project_cptp(r);
    }
    Ok(TransferMatrix(r))
}

fn project_tp(r: &mut SMatrix<f64, 16, 16>) {
    for j in 0..16 {
        r[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
    }
    for e in r.iter_mut() {
        *e = e.clamp(-1.0, 1.0);
    }
}

/// Choi matrix of a transfer matrix: C = (1/16) sum_ij R_ij s_i (x) s_j^T.
fn choi_of(r: &SMatrix<f64, 16, 16>) -> DMatrix<Complex64> {
    let mut choi = DMatrix::<Complex64>::zeros(16, 16);
    for i in 0..16 {
        for j in 0..16 {
            let coef = r[(i, j)] / 16.0;
            if coef == 0.0 {
                continue;
            }
            let op = two_qubit_pauli(i / 4, i % 4).kronecker(&two_qubit_pauli(j / 4, j % 4).transpose());
            for row in 0..16 {
                for col in 0..16 {
                    choi[(row, col)] += op[(row, col)] * c(coef);
                }
            }
        }
    }
    choi
}

fn ptm_of_choi(choi: &DMatrix<Complex64>) -> SMatrix<f64, 16, 16> {
    let mut r = SMatrix::<f64, 16, 16>::zeros();
    for i in 0..16 {
        for j in 0..16 {
            let op = two_qubit_pauli(i / 4, i % 4).kronecker(&two_qubit_pauli(j / 4, j % 4).transpose());
            let mut tr = Complex64::new(0.0, 0.0);
            for row in 0..16 {
                for col in 0..16 {
                    tr += choi[(row, col)] * op[(col, row)];
                }
            }
            r[(i, j)] = tr.re;
        }
    }
    r
}

/// Alternate between the positive-semidefinite cone (Choi eigenvalue
/// clipping) and the trace-preservation affine set until the negative
/// mass is negligible.
fn project_cptp(mut r: SMatrix<f64, 16, 16>) -> SMatrix<f64, 16, 16> {
    for _ in 0..64 {
        let choi = choi_of(&r);
        let (vals, vecs) = eig_dyn(&choi);
        let neg: f64 = vals.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
        if neg < 1e-12 {
            break;
        }
        let clipped = DMatrix::from_diagonal(&vals.map(|v| c(v.max(0.0))));
        let fixed = &vecs * clipped * vecs.adjoint();
        r = ptm_of_choi(&fixed);
        project_tp(&mut r);
    }
    project_tp(&mut r);
    r
}
