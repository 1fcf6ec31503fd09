//! Destabilizer/stabilizer tableau with packed bit rows.
//!
//! Rows 0..n are destabilizers, rows n..2n stabilizers. Each row stores its
//! X and Z bit masks in one u64 (so n <= 64) plus a phase exponent e in
//! {0,1,2,3}, the row operator being i^e times the bare Pauli letters.
//! Stabilizer rows stay Hermitian (e even); destabilizer phases are never
//! read and are allowed to drift through row sums.

use crate::TableauError;
use floqsim_core::{phase_exponent_product, CoreError, Instruction, PauliString};

const MAX_QUBITS: usize = 64;

/// Tolerance for snapping rotation angles to quarter turns.
const ANGLE_EPS: f64 = 1e-9;

/// Stabilizer state of `n` qubits, initially |0...0>.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    phases: Vec<u8>,
}

impl Tableau {
    pub fn new(n: usize) -> Result<Tableau, TableauError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(TableauError::Core(CoreError::TooManyQubits(n)));
        }
        let mut t = Tableau {
            n,
            xs: vec![0; 2 * n],
            zs: vec![0; 2 * n],
            phases: vec![0; 2 * n],
        };
        for q in 0..n {
            t.xs[q] = 1 << q; // destabilizer X_q
            t.zs[n + q] = 1 << q; // stabilizer Z_q
        }
        Ok(t)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    fn check_qubit(&self, q: usize) -> Result<(), TableauError> {
        if q >= self.n {
            return Err(TableauError::Core(CoreError::QubitOutOfRange {
                index: q,
                n_qubits: self.n,
            }));
        }
        Ok(())
    }

    /// Stabilizer row `i` in 0..n as a signed Pauli string.
    pub fn stabilizer_row(&self, i: usize) -> Result<PauliString, TableauError> {
        if i >= self.n {
            return Err(TableauError::Core(CoreError::RecordOutOfRange(i, self.n)));
        }
        let k = self.n + i;
        PauliString::from_masks(self.n, self.xs[k], self.zs[k], self.phases[k])
            .map_err(TableauError::Core)
    }

    pub fn h(&mut self, q: usize) -> Result<(), TableauError> {
        self.check_qubit(q)?;
        let m = 1u64 << q;
        for i in 0..2 * self.n {
            let x = self.xs[i] & m;
            let z = self.zs[i] & m;
            if x != 0 && z != 0 {
                self.phases[i] = (self.phases[i] + 2) & 3;
            }
            self.xs[i] = (self.xs[i] & !m) | z;
            self.zs[i] = (self.zs[i] & !m) | x;
        }
        Ok(())
    }

    pub fn s(&mut self, q: usize) -> Result<(), TableauError> {
        self.check_qubit(q)?;
        let m = 1u64 << q;
        for i in 0..2 * self.n {
            let x = self.xs[i] & m;
            if x != 0 && self.zs[i] & m != 0 {
                self.phases[i] = (self.phases[i] + 2) & 3;
            }
            self.zs[i] ^= x;
        }
        Ok(())
    }

    pub fn sdg(&mut self, q: usize) -> Result<(), TableauError> {
        self.check_qubit(q)?;
        let m = 1u64 << q;
        for i in 0..2 * self.n {
            let x = self.xs[i] & m;
            if x != 0 && self.zs[i] & m == 0 {
                self.phases[i] = (self.phases[i] + 2) & 3;
            }
            self.zs[i] ^= x;
        }
        Ok(())
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<(), TableauError> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(TableauError::Core(CoreError::RepeatedQubit(control)));
        }
        let mc = 1u64 << control;
        let mt = 1u64 << target;
        for i in 0..2 * self.n {
            let xc = self.xs[i] & mc != 0;
            let zc = self.zs[i] & mc != 0;
            let xt = self.xs[i] & mt != 0;
            let zt = self.zs[i] & mt != 0;
            if xc && zt && xt == zc {
                self.phases[i] = (self.phases[i] + 2) & 3;
            }
            if xc {
                self.xs[i] ^= mt;
            }
            if zt {
                self.zs[i] ^= mc;
            }
        }
        Ok(())
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<(), TableauError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(TableauError::Core(CoreError::RepeatedQubit(a)));
        }
        let ma = 1u64 << a;
        let mb = 1u64 << b;
        for i in 0..2 * self.n {
            let xa = self.xs[i] & ma != 0;
            let xb = self.xs[i] & mb != 0;
            let za = self.zs[i] & ma != 0;
            let zb = self.zs[i] & mb != 0;
            if xa && xb && za != zb {
                self.phases[i] = (self.phases[i] + 2) & 3;
            }
            if xa {
                self.zs[i] ^= mb;
            }
            if xb {
                self.zs[i] ^= ma;
            }
        }
        Ok(())
    }

    /// Conjugate every row by the Pauli letters of `op` (its own phase is an
    /// unobservable global factor): rows that anticommute pick up a sign.
    pub fn pauli_gate(&mut self, op: &PauliString) -> Result<(), TableauError> {
        if op.n_qubits() != self.n {
            return Err(TableauError::Core(CoreError::DimensionMismatch(
                self.n,
                op.n_qubits(),
            )));
        }
        self.pauli_masks(op.x_mask(), op.z_mask());
        Ok(())
    }

    fn pauli_masks(&mut self, px: u64, pz: u64) {
        for i in 0..2 * self.n {
            if Self::anticommutes(self.xs[i], self.zs[i], px, pz) {
                self.phases[i] = (self.phases[i] + 2) & 3;
            }
        }
    }

    #[inline]
    fn anticommutes(ax: u64, az: u64, bx: u64, bz: u64) -> bool {
        ((ax & bz) ^ (az & bx)).count_ones() & 1 == 1
    }

    /// Multiply row `i` by row `k` in place (row_i <- row_i * row_k).
    fn rowsum(&mut self, i: usize, k: usize) {
        let g = phase_exponent_product(self.xs[i], self.zs[i], self.xs[k], self.zs[k]);
        self.phases[i] = (self.phases[i] + self.phases[k] + g) & 3;
        self.xs[i] ^= self.xs[k];
        self.zs[i] ^= self.zs[k];
    }

    /// Projectively measure a Hermitian signed Pauli product.
    ///
    /// `plus_if_random` supplies the coin for the equal-weight branch so the
    /// caller owns all randomness. Returns (outcome, was_random) where the
    /// outcome is for the signed operator as given.
    pub fn measure_pauli(
        &mut self,
        op: &PauliString,
        plus_if_random: bool,
    ) -> Result<(i8, bool), TableauError> {
        if op.n_qubits() != self.n {
            return Err(TableauError::Core(CoreError::DimensionMismatch(
                self.n,
                op.n_qubits(),
            )));
        }
        let s = op.sign().map_err(TableauError::Core)?;
        let px = op.x_mask();
        let pz = op.z_mask();
        let n = self.n;
        let pivot = (n..2 * n).find(|&k| Self::anticommutes(self.xs[k], self.zs[k], px, pz));
        if let Some(k) = pivot {
            for i in 0..2 * n {
                if i != k && Self::anticommutes(self.xs[i], self.zs[i], px, pz) {
                    self.rowsum(i, k);
                }
            }
            self.xs[k - n] = self.xs[k];
            self.zs[k - n] = self.zs[k];
            self.phases[k - n] = self.phases[k];
            let outcome: i8 = if plus_if_random { 1 } else { -1 };
            // New stabilizer is (outcome for the bare letters) * letters.
            let t = outcome * s;
            self.xs[k] = px;
            self.zs[k] = pz;
            self.phases[k] = if t == 1 { 0 } else { 2 };
            Ok((outcome, true))
        } else {
            let t = self.deterministic_sign(px, pz);
            Ok((t * s, false))
        }
    }

    /// Sign t such that t * (bare letters) lies in the stabilizer group.
    /// Caller guarantees every stabilizer row commutes with (px, pz).
    fn deterministic_sign(&self, px: u64, pz: u64) -> i8 {
        let n = self.n;
        let (mut sx, mut sz, mut sp) = (0u64, 0u64, 0u8);
        for i in 0..n {
            if Self::anticommutes(self.xs[i], self.zs[i], px, pz) {
                let g = phase_exponent_product(sx, sz, self.xs[n + i], self.zs[n + i]);
                sp = (sp + self.phases[n + i] + g) & 3;
                sx ^= self.xs[n + i];
                sz ^= self.zs[n + i];
            }
        }
        debug_assert_eq!((sx, sz), (px, pz));
        debug_assert_eq!(sp & 1, 0);
        if sp == 0 {
            1
        } else {
            -1
        }
    }

    /// Expectation of a signed Pauli product: None when the outcome would be
    /// random, Some(+-1) when deterministic. Does not mutate the state.
    pub fn expect_pauli(&self, op: &PauliString) -> Result<Option<i8>, TableauError> {
        if op.n_qubits() != self.n {
            return Err(TableauError::Core(CoreError::DimensionMismatch(
                self.n,
                op.n_qubits(),
            )));
        }
        let s = op.sign().map_err(TableauError::Core)?;
        let px = op.x_mask();
        let pz = op.z_mask();
        let random = (self.n..2 * self.n)
            .any(|k| Self::anticommutes(self.xs[k], self.zs[k], px, pz));
        if random {
            return Ok(None);
        }
        Ok(Some(self.deterministic_sign(px, pz) * s))
    }

    /// Apply one unitary Clifford instruction. Rotations are accepted only
    /// at quarter-turn angles; measurements, resets and noise sites belong
    /// to the executor, not here.
    pub fn apply(&mut self, instr: &Instruction) -> Result<(), TableauError> {
        match instr {
            Instruction::H(q) => self.h(*q),
            Instruction::S(q) => self.s(*q),
            Instruction::Sdg(q) => self.sdg(*q),
            Instruction::PauliGate(op) => self.pauli_gate(op),
            Instruction::Cx { control, target } => self.cx(*control, *target),
            Instruction::Cz { a, b } => self.cz(*a, *b),
            Instruction::Rx { q, theta } => {
                let k = quarter_turns(*theta)
                    .ok_or_else(|| TableauError::NotClifford(format!("Rx({theta})")))?;
                if k != 0 {
                    self.h(*q)?;
                    self.rz_quarter(*q, k)?;
                    self.h(*q)?;
                }
                Ok(())
            }
            Instruction::Ry { q, theta } => {
                let k = quarter_turns(*theta)
                    .ok_or_else(|| TableauError::NotClifford(format!("Ry({theta})")))?;
                if k != 0 {
                    self.sdg(*q)?;
                    self.h(*q)?;
                    self.rz_quarter(*q, k)?;
                    self.h(*q)?;
                    self.s(*q)?;
                }
                Ok(())
            }
            Instruction::Rz { q, theta } => {
                let k = quarter_turns(*theta)
                    .ok_or_else(|| TableauError::NotClifford(format!("Rz({theta})")))?;
                self.rz_quarter(*q, k)
            }
            Instruction::IdleDd { .. } => Ok(()),
            other => Err(TableauError::NotClifford(format!("{other:?}"))),
        }
    }

    fn rz_quarter(&mut self, q: usize, k: u8) -> Result<(), TableauError> {
        match k {
            0 => Ok(()),
            1 => self.s(q),
            2 => {
                self.check_qubit(q)?;
                self.pauli_masks(0, 1 << q);
                Ok(())
            }
            _ => self.sdg(q),
        }
    }

    /// Verify the symplectic structure: stabilizers pairwise commute and are
    /// Hermitian, destabilizers pairwise commute, and destabilizer i
    /// anticommutes with stabilizer j exactly when i == j. This forces both
    /// halves to stay full rank, so it is a complete consistency check.
    pub fn check_invariants(&self) -> Result<(), TableauError> {
        let n = self.n;
        for i in 0..n {
            if self.phases[n + i] & 1 != 0 {
                return Err(TableauError::InvariantViolated(format!(
                    "stabilizer {i} has odd phase exponent"
                )));
            }
            for j in 0..n {
                let ds = Self::anticommutes(self.xs[i], self.zs[i], self.xs[n + j], self.zs[n + j]);
                if ds != (i == j) {
                    return Err(TableauError::InvariantViolated(format!(
                        "destabilizer {i} vs stabilizer {j}: anticommute={ds}"
                    )));
                }
                if j > i {
                    if Self::anticommutes(self.xs[n + i], self.zs[n + i], self.xs[n + j], self.zs[n + j]) {
                        return Err(TableauError::InvariantViolated(format!(
                            "stabilizers {i} and {j} anticommute"
                        )));
                    }
                    if Self::anticommutes(self.xs[i], self.zs[i], self.xs[j], self.zs[j]) {
                        return Err(TableauError::InvariantViolated(format!(
                            "destabilizers {i} and {j} anticommute"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Snap an angle to a whole number of quarter turns, reduced mod 4.
/// None when the angle is not within tolerance of any quarter turn.
fn quarter_turns(theta: f64) -> Option<u8> {
    let q = theta / std::f64::consts::FRAC_PI_2;
    let k = q.round();
    if (theta - k * std::f64::consts::FRAC_PI_2).abs() > ANGLE_EPS {
        return None;
    }
    Some(k.rem_euclid(4.0) as u8 & 3)
}
