//! Signed n-qubit Pauli operators over the symplectic bit representation.
//!
//! Layout: one u64 mask per part, bit q = qubit q. Letter decoding per qubit:
//! (x,z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z. A global phase i^k, k in 0..4,
//! multiplies the tensor product of Hermitian letters, so phase exponents
//! 0 and 2 are the Hermitian (+1 / -1) operators.

use crate::CoreError;
use std::fmt;
use std::str::FromStr;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (u64, u64) {
        match self {
            Pauli::I => (0, 0),
            Pauli::X => (1, 0),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Upper-case letter naming this Pauli.
    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Per-site phase exponents accumulated when multiplying two Pauli strings.
///
/// Returns k in {0,1,2,3} such that the site-wise product of the letter
/// strings (a first, then b, i.e. a*b) carries an extra factor i^k beyond
/// the symplectic XOR of the masks. Cyclic pairs XY, YZ, ZX give +i each,
/// the reversed pairs give -i each.
pub fn phase_exponent_product(ax: u64, az: u64, bx: u64, bz: u64) -> u8 {
    let cyclic = (ax & !az & bx & bz) | (ax & az & !bx & bz) | (!ax & az & bx & !bz);
    let anti = (ax & az & bx & !bz) | (!ax & az & bx & bz) | (ax & !az & !bx & bz);
    (((cyclic.count_ones() + 3 * anti.count_ones()) % 4) as u8) & 3
}

/// Signed Pauli operator on up to 64 qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    /// Exponent k of the global phase i^k, k in 0..4.
    phase: u8,
}

fn check_n(n: usize) -> Result<(), CoreError> {
    if n > 64 {
        return Err(CoreError::TooManyQubits(n));
    }
    Ok(())
}

fn check_q(n: usize, q: usize) -> Result<(), CoreError> {
    if q >= n {
        return Err(CoreError::QubitOutOfRange {
            index: q,
            n_qubits: n,
        });
    }
    Ok(())
}

impl PauliString {
    /// Identity on `n` qubits with phase +1.
    pub fn identity(n: usize) -> Result<PauliString, CoreError> {
        check_n(n)?;
        Ok(PauliString {
            n,
            x: 0,
            z: 0,
            phase: 0,
        })
    }

    /// Single letter `p` on qubit `q`, identity elsewhere, phase +1.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<PauliString, CoreError> {
        Self::from_ops(n, &[(q, p)])
    }

    /// Product of letters at the listed qubits, phase +1. Duplicate qubits
    /// are rejected so accidental cancellation cannot hide a typo.
    pub fn from_ops(n: usize, ops: &[(usize, Pauli)]) -> Result<PauliString, CoreError> {
        check_n(n)?;
        let mut x = 0u64;
        let mut z = 0u64;
        let mut seen = 0u64;
        for &(q, p) in ops {
            check_q(n, q)?;
            let bit = 1u64 << q;
            if seen & bit != 0 {
                return Err(CoreError::DuplicateQubit(q));
            }
            seen |= bit;
            let (px, pz) = p.bits();
            x |= px << q;
            z |= pz << q;
        }
        Ok(PauliString { n, x, z, phase: 0 })
    }

    /// X letters on each listed qubit.
    pub fn x_on(n: usize, qubits: &[usize]) -> Result<PauliString, CoreError> {
        let ops: Vec<_> = qubits.iter().map(|&q| (q, Pauli::X)).collect();
        Self::from_ops(n, &ops)
    }

    /// Z letters on each listed qubit.
    pub fn z_on(n: usize, qubits: &[usize]) -> Result<PauliString, CoreError> {
        let ops: Vec<_> = qubits.iter().map(|&q| (q, Pauli::Z)).collect();
        Self::from_ops(n, &ops)
    }

    /// Build from raw masks; used by backends that already work bitwise.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Result<PauliString, CoreError> {
        check_n(n)?;
        let live = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if x & !live != 0 || z & !live != 0 {
            return Err(CoreError::QubitOutOfRange {
                index: 63 - (x | z).leading_zeros() as usize,
                n_qubits: n,
            });
        }
        Ok(PauliString {
            n,
            x,
            z,
            phase: phase & 3,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Exponent k of the global phase i^k.
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    /// Sign of a Hermitian string: +1 for phase exponent 0, -1 for 2.
    pub fn sign(&self) -> Result<i8, CoreError> {
        match self.phase {
            0 => Ok(1),
            2 => Ok(-1),
            k => Err(CoreError::NonHermitian(k)),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase == 0 || self.phase == 2
    }

    /// True when every letter is I (any phase).
    pub fn is_identity_letters(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn letter_at(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.x | self.z;
        (0..self.n).filter(move |&q| mask >> q & 1 == 1)
    }

    /// Same letters with the phase multiplied by i^k.
    pub fn times_i_power(&self, k: u8) -> PauliString {
        PauliString {
            phase: (self.phase + k) & 3,
            ..*self
        }
    }

    pub fn negated(&self) -> PauliString {
        self.times_i_power(2)
    }

    /// Hermitian adjoint: letters unchanged, phase conjugated.
    pub fn dagger(&self) -> PauliString {
        PauliString {
            phase: (4 - self.phase) & 3,
            ..*self
        }
    }

    /// Exact product self * other, phase included.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString, CoreError> {
        if self.n != other.n {
            return Err(CoreError::DimensionMismatch(self.n, other.n));
        }
        let k = phase_exponent_product(self.x, self.z, other.x, other.z);
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + k) & 3,
        })
    }

    /// True iff the symplectic inner product vanishes.
    pub fn commutes(&self, other: &PauliString) -> Result<bool, CoreError> {
        if self.n != other.n {
            return Err(CoreError::DimensionMismatch(self.n, other.n));
        }
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(anti % 2 == 0)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            write!(f, "{}", self.letter_at(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = CoreError;

    /// Parses the text form: optional sign prefix ("", "+", "-", "i", "+i",
    /// "-i") followed by letters IXYZ, qubit 0 leftmost.
    fn from_str(s: &str) -> Result<PauliString, CoreError> {
        let (phase, rest) = if let Some(r) = s.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (1u8, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (1u8, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2u8, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0u8, r)
        } else {
            (0u8, s)
        };
        if rest.is_empty() {
            return Err(CoreError::Parse(format!("no letters in `{s}`")));
        }
        check_n(rest.len())?;
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, c) in rest.chars().enumerate() {
            let (px, pz) = match c {
                'I' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                other => {
                    return Err(CoreError::Parse(format!("bad Pauli letter `{other}` in `{s}`")))
                }
            };
            x |= px << q;
            z |= pz << q;
        }
        Ok(PauliString {
            n: rest.len(),
            x,
            z,
            phase,
        })
    }
}

/// Product of a non-empty list of +/-1 outcomes.
pub fn parity_product(outcomes: &[i8]) -> Result<i8, CoreError> {
    if outcomes.is_empty() {
        return Err(CoreError::EmptyProduct);
    }
    let mut acc = 1i8;
    for &o in outcomes {
        if o != 1 && o != -1 {
            return Err(CoreError::BadOutcome(o));
        }
        acc *= o;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        // (left, right, expected)
        let cases = [
            ("X", "Z", "-iY"),
            ("Z", "X", "iY"),
            ("X", "Y", "iZ"),
            ("Y", "X", "-iZ"),
            ("Y", "Z", "iX"),
            ("Z", "Y", "-iX"),
            ("X", "X", "I"),
            ("Y", "Y", "I"),
            ("Z", "Z", "I"),
            ("I", "Y", "Y"),
            ("Y", "I", "Y"),
        ];
        for (a, b, want) in cases {
            assert_eq!(p(a).mul(&p(b)).unwrap(), p(want), "{a}*{b}");
        }
    }

    #[test]
    fn involution_for_hermitian_strings() {
        for s in ["XYZ", "-ZZYX", "YIIY", "IIII"] {
            let a = p(s);
            let sq = a.mul(&a).unwrap();
            assert!(sq.is_identity_letters());
            assert_eq!(sq.phase_exponent(), 0, "{s} squared should be +identity");
        }
    }

    #[test]
    fn row_products_combine_without_phase() {
        // X on {3,6} times {4,7} times {5,8} = X on 3..=8, phase +1.
        let a = PauliString::x_on(9, &[3, 6]).unwrap();
        let b = PauliString::x_on(9, &[4, 7]).unwrap();
        let c = PauliString::x_on(9, &[5, 8]).unwrap();
        let prod = a.mul(&b).unwrap().mul(&c).unwrap();
        assert_eq!(prod, PauliString::x_on(9, &[3, 4, 5, 6, 7, 8]).unwrap());
        assert_eq!(prod.phase_exponent(), 0);
    }

    #[test]
    fn commutation_examples() {
        let a = PauliString::x_on(4, &[0, 3]).unwrap();
        let b = PauliString::z_on(4, &[0, 1]).unwrap();
        assert!(!a.commutes(&b).unwrap());
        let id = PauliString::identity(4).unwrap();
        assert!(a.commutes(&id).unwrap());
        // Two overlapping sites anticommuting pairwise commute overall.
        let c = PauliString::x_on(4, &[0, 1]).unwrap();
        let d = PauliString::z_on(4, &[0, 1]).unwrap();
        assert!(c.commutes(&d).unwrap());
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in ["-iXIZY", "XIZ", "-ZZ", "iY", "IIII", "YXZI"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("+XX"), p("XX"));
        assert_eq!(p("+iZ"), p("iZ"));
        assert!("".parse::<PauliString>().is_err());
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("-".parse::<PauliString>().is_err());
    }

    #[test]
    fn sign_and_dagger() {
        assert_eq!(p("XX").sign().unwrap(), 1);
        assert_eq!(p("-XX").sign().unwrap(), -1);
        assert!(p("iX").sign().is_err());
        assert_eq!(p("iX").dagger(), p("-iX"));
        assert_eq!(p("-YZ").dagger(), p("-YZ"));
    }

    #[test]
    fn parity_product_examples() {
        assert_eq!(parity_product(&[1, -1, -1]).unwrap(), 1);
        assert_eq!(parity_product(&[1, 1, 1]).unwrap(), 1);
        assert_eq!(parity_product(&[-1, 1, 1]).unwrap(), -1);
        assert!(parity_product(&[]).is_err());
        assert!(parity_product(&[0]).is_err());
    }

    #[test]
    fn duplicate_support_rejected() {
        assert!(PauliString::from_ops(3, &[(1, Pauli::X), (1, Pauli::Z)]).is_err());
    }

    // Dense-matrix oracle on <= 3 qubits: complex numbers as [re, im].

    type C = [f64; 2];

    fn cmul(a: C, b: C) -> C {
        [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]]
    }

    fn cadd(a: C, b: C) -> C {
        [a[0] + b[0], a[1] + b[1]]
    }

    fn letter_mat(p: Pauli) -> [[C; 2]; 2] {
        let o = [0.0, 0.0];
        let u = [1.0, 0.0];
        match p {
            Pauli::I => [[u, o], [o, u]],
            Pauli::X => [[o, u], [u, o]],
            Pauli::Y => [[o, [0.0, -1.0]], [[0.0, 1.0], o]],
            Pauli::Z => [[u, o], [o, [-1.0, 0.0]]],
        }
    }

    fn to_matrix(ps: &PauliString) -> Vec<Vec<C>> {
        let n = ps.n_qubits();
        let dim = 1usize << n;
        let phase = match ps.phase_exponent() {
            0 => [1.0, 0.0],
            1 => [0.0, 1.0],
            2 => [-1.0, 0.0],
            _ => [0.0, -1.0],
        };
        let mut m = vec![vec![[0.0, 0.0]; dim]; dim];
        for row in 0..dim {
            for col in 0..dim {
                let mut v = phase;
                let mut zero = false;
                // Qubit q indexes bit q of the basis state.
                for q in 0..n {
                    let e = letter_mat(ps.letter_at(q))[row >> q & 1][col >> q & 1];
                    if e == [0.0, 0.0] {
                        zero = true;
                        break;
                    }
                    v = cmul(v, e);
                }
                if !zero {
                    m[row][col] = v;
                }
            }
        }
        m
    }

    fn mat_mul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
        let dim = a.len();
        let mut out = vec![vec![[0.0, 0.0]; dim]; dim];
        for i in 0..dim {
            for k in 0..dim {
                if a[i][k] == [0.0, 0.0] {
                    continue;
                }
                for j in 0..dim {
                    out[i][j] = cadd(out[i][j], cmul(a[i][k], b[k][j]));
                }
            }
        }
        out
    }

    fn mat_close(a: &[Vec<C>], b: &[Vec<C>]) -> bool {
        a.iter().zip(b).all(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .all(|(x, y)| (x[0] - y[0]).abs() < 1e-12 && (x[1] - y[1]).abs() < 1e-12)
        })
    }

    fn random_pauli(n: usize, seed: &mut u64) -> PauliString {
        let mut next = || {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*seed >> 33) as u64
        };
        PauliString::from_masks(
            n,
            next() & ((1 << n) - 1),
            next() & ((1 << n) - 1),
            (next() & 3) as u8,
        )
        .unwrap()
    }

    #[test]
    fn multiply_matches_matrix_oracle() {
        let mut seed = 0x5eed_0001u64;
        for _ in 0..300 {
            for n in 1..=3usize {
                let a = random_pauli(n, &mut seed);
                let b = random_pauli(n, &mut seed);
                let prod = a.mul(&b).unwrap();
                let oracle = mat_mul(&to_matrix(&a), &to_matrix(&b));
                assert!(
                    mat_close(&to_matrix(&prod), &oracle),
                    "product mismatch: {a} * {b} = {prod}"
                );
            }
        }
    }

    #[test]
    fn multiply_is_associative() {
        let mut seed = 0xabc1_2345u64;
        for _ in 0..2000 {
            let n = 4;
            let a = random_pauli(n, &mut seed);
            let b = random_pauli(n, &mut seed);
            let c = random_pauli(n, &mut seed);
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn commutes_matches_matrix_oracle() {
        let mut seed = 0x77aa_bb01u64;
        for _ in 0..500 {
            for n in 1..=3usize {
                let a = random_pauli(n, &mut seed);
                let b = random_pauli(n, &mut seed);
                let ab = mat_mul(&to_matrix(&a), &to_matrix(&b));
                let ba = mat_mul(&to_matrix(&b), &to_matrix(&a));
                assert_eq!(
                    a.commutes(&b).unwrap(),
                    mat_close(&ab, &ba),
                    "commutation mismatch for {a}, {b}"
                );
            }
        }
    }
}
