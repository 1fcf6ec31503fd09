//! The dense state and its gate/measurement kernels.

use crate::{VectorError, MAX_DENSE_QUBITS};
use floqsim_core::{Instruction, PauliString};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

type C = Complex64;

/// Unit-norm dense state on `n` qubits; basis index bit q is qubit q.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<C>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn zero(n: usize) -> Result<StateVector, VectorError> {
        if n > MAX_DENSE_QUBITS {
            return Err(VectorError::TooLarge(n, MAX_DENSE_QUBITS));
        }
        let mut amps = vec![C::new(0.0, 0.0); 1 << n];
        amps[0] = C::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn apply_1q(&mut self, q: usize, m: [[C; 2]; 2]) {
        let step = 1usize << q;
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i0 in base..base + step {
                let i1 = i0 + step;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += step << 1;
        }
    }

    fn apply_pauli_gate(&mut self, op: &PauliString) {
        // Letters act as i^{#Y} * X^x * Z^z; the i^{#Y} factor is global
        // and kept so the action matches the literal matrix product.
        let x = op.x_mask();
        let z = op.z_mask();
        let y_count = (x & z).count_ones();
        let global = C::i().powu(y_count);
        let dim = self.amps.len();
        let mut out = vec![C::new(0.0, 0.0); dim];
        for j in 0..dim {
            let sign = if ((j as u64) & z).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[j ^ x as usize] = global * sign * self.amps[j];
        }
        self.amps = out;
    }

    /// Apply one unitary instruction. `IdleDd` is a timing marker and a
    /// no-op here; measurements and noise sites are rejected.
    pub fn apply(&mut self, instr: &Instruction) -> Result<(), VectorError> {
        let o = C::new(0.0, 0.0);
        let u = C::new(1.0, 0.0);
        match instr {
            Instruction::H(q) => {
                let h = C::new(FRAC_1_SQRT_2, 0.0);
                self.apply_1q(*q, [[h, h], [h, -h]]);
            }
            Instruction::S(q) => self.apply_1q(*q, [[u, o], [o, C::i()]]),
            Instruction::Sdg(q) => self.apply_1q(*q, [[u, o], [o, -C::i()]]),
            Instruction::PauliGate(op) => self.apply_pauli_gate(op),
            Instruction::Rx { q, theta } => {
                let c = C::new((theta / 2.0).cos(), 0.0);
                let s = C::new(0.0, -(theta / 2.0).sin());
                self.apply_1q(*q, [[c, s], [s, c]]);
            }
            Instruction::Ry { q, theta } => {
                let c = C::new((theta / 2.0).cos(), 0.0);
                let s = C::new((theta / 2.0).sin(), 0.0);
                self.apply_1q(*q, [[c, -s], [s, c]]);
            }
            Instruction::Rz { q, theta } => {
                let m = C::from_polar(1.0, -theta / 2.0);
                let p = C::from_polar(1.0, theta / 2.0);
                self.apply_1q(*q, [[m, o], [o, p]]);
            }
            Instruction::Cx { control, target } => {
                let cbit = 1usize << control;
                let tbit = 1usize << target;
                for j in 0..self.amps.len() {
                    if j & cbit != 0 && j & tbit == 0 {
                        self.amps.swap(j, j | tbit);
                    }
                }
            }
            Instruction::Cz { a, b } => {
                let mask = (1usize << a) | (1usize << b);
                for j in 0..self.amps.len() {
                    if j & mask == mask {
                        self.amps[j] = -self.amps[j];
                    }
                }
            }
            Instruction::IdleDd { .. } => {}
            Instruction::MeasurePauli { .. }
            | Instruction::ResetZ(_)
            | Instruction::NoiseSite { .. } => return Err(VectorError::NotUnitary),
        }
        Ok(())
    }

    /// <psi|P|psi> for a Hermitian signed Pauli; the value is real.
    pub fn expectation(&self, p: &PauliString) -> Result<f64, VectorError> {
        let sign = p.sign().map_err(|_| VectorError::NonHermitianOperator)?;
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let y_count = (p.x_mask() & z).count_ones();
        let global = C::i().powu(y_count) * sign as f64;
        let mut acc = C::new(0.0, 0.0);
        for j in 0..self.amps.len() {
            let sgn = if ((j as u64) & z).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            acc += self.amps[j ^ x].conj() * global * sgn * self.amps[j];
        }
        debug_assert!(acc.im.abs() < 1e-9, "expectation not real: {acc}");
        Ok(acc.re)
    }

    /// Probability of `outcome` for a projective measurement of `p`, plus
    /// the collapsed renormalized state.
    pub fn measure_pauli_prob(
        &self,
        p: &PauliString,
        outcome: i8,
    ) -> Result<(f64, StateVector), VectorError> {
        let mut collapsed = self.clone();
        let prob = collapsed.collapse(p, outcome)?;
        Ok((prob, collapsed))
    }

    /// In-place projection onto the `outcome` eigenspace of `p`, returning
    /// the branch probability. Errors when that probability is ~0.
    pub(crate) fn collapse(&mut self, p: &PauliString, outcome: i8) -> Result<f64, VectorError> {
        let sign = p.sign().map_err(|_| VectorError::NonHermitianOperator)?;
        debug_assert!(outcome == 1 || outcome == -1);
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let y_count = (p.x_mask() & z).count_ones();
        let factor = C::i().powu(y_count) * (sign * outcome) as f64 * 0.5;
        // psi' = (psi + outcome*P psi)/2, built in place: the map j -> j^x
        // pairs indices, so process each pair once.
        if x == 0 {
            for j in 0..self.amps.len() {
                let sgn = if ((j as u64) & z).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                self.amps[j] = self.amps[j] * 0.5 + factor * sgn * self.amps[j];
            }
        } else {
            for j in 0..self.amps.len() {
                let k = j ^ x;
                if k < j {
                    continue;
                }
                let sj = if ((j as u64) & z).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let sk = if ((k as u64) & z).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let aj = self.amps[j];
                let ak = self.amps[k];
                // P maps |j> -> global*s_j |k> and |k> -> global*s_k |j>.
                self.amps[j] = aj * 0.5 + factor * sk * ak;
                self.amps[k] = ak * 0.5 + factor * sj * aj;
            }
        }
        let prob: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        if prob < 1e-12 {
            return Err(VectorError::ZeroProbabilityBranch);
        }
        let scale = 1.0 / prob.sqrt();
        for a in &mut self.amps {
            *a *= scale;
        }
        Ok(prob)
    }
}
