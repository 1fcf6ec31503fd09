//! Sign bookkeeping for post-processing.
//!
//! Every quantity we ever derive from a shot record (folded check values,
//! stabilizer baselines, detector bits, frame signs, logical parities) is a
//! +-1 constant times a product of recorded outcomes. [`DerivedValue`]
//! represents such a product as an XOR mask over measurement ordinals. The
//! representation is closed under multiplication, evaluates with a couple of
//! popcounts per shot, and doubles as the transfer function for fault
//! analysis: flipping outcome `i` flips the value iff bit `i` is set.
//!
//! Some encodings leave a frame sign genuinely undefined (for example the
//! dynamical Z frame of an X-basis encoding). Each such unknown is one of a
//! fixed set of atoms. An atom appearing an even number of times cancels;
//! a value with a leftover atom evaluates under the +1 convention and is
//! reported as undefined, which only ever affects operators with zero
//! expectation.

use crate::FbsError;
use floqsim_core::MeasRecord;

/// Upper bound on measurements per experiment circuit.
pub const MAX_MEAS: usize = 256;

const WORDS: usize = MAX_MEAS / 64;

/// Set of measurement ordinals, XOR-composable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TagMask {
    w: [u64; WORDS],
}

impl TagMask {
    pub fn empty() -> TagMask {
        TagMask::default()
    }

    pub fn single(ordinal: usize) -> TagMask {
        let mut m = TagMask::default();
        m.toggle(ordinal);
        m
    }

    pub fn toggle(&mut self, ordinal: usize) {
        assert!(ordinal < MAX_MEAS, "measurement ordinal {ordinal} out of range");
        self.w[ordinal / 64] ^= 1u64 << (ordinal % 64);
    }

    pub fn xor(&self, other: &TagMask) -> TagMask {
        let mut w = self.w;
        for (a, b) in w.iter_mut().zip(other.w.iter()) {
            *a ^= b;
        }
        TagMask { w }
    }

    pub fn is_empty(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    /// Parity of the intersection with `bits`.
    pub fn overlap_parity(&self, bits: &TagMask) -> bool {
        let mut acc = 0u32;
        for (a, b) in self.w.iter().zip(bits.w.iter()) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    pub fn ordinals(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &word) in self.w.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(wi * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }
}

/// Shot record repacked for mask evaluation: bit i set iff outcome i is -1.
#[derive(Debug, Clone, Copy)]
pub struct OutcomeBits(TagMask);

impl OutcomeBits {
    pub fn from_record(record: &MeasRecord) -> Result<OutcomeBits, FbsError> {
        if record.len() > MAX_MEAS {
            return Err(FbsError::TooManyMeasurements(record.len()));
        }
        let mut m = TagMask::empty();
        for (i, &o) in record.as_slice().iter().enumerate() {
            if o == -1 {
                m.toggle(i);
            }
        }
        Ok(OutcomeBits(m))
    }

    pub fn mask(&self) -> &TagMask {
        &self.0
    }
}

/// Unknown frame atoms. Bit positions in `DerivedValue::atoms`.
pub mod atoms {
    /// Dynamical X frame at encoding time.
    pub const GX0: u8 = 1 << 0;
    /// Dynamical Z frame at encoding time.
    pub const GZ0: u8 = 1 << 1;
    /// Value of check z12 at encoding time.
    pub const Z12_0: u8 = 1 << 2;
    /// Value of check z56 at encoding time.
    pub const Z56_0: u8 = 1 << 3;
    /// Initial stabilizer values.
    pub const SXA: u8 = 1 << 4;
    pub const SXC: u8 = 1 << 5;
    pub const SZB: u8 = 1 << 6;
    pub const SZD: u8 = 1 << 7;
}

/// A +-1 quantity derived from a shot record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedValue {
    pub mask: TagMask,
    pub constant: i8,
    pub atoms: u8,
}

impl DerivedValue {
    pub fn one() -> DerivedValue {
        DerivedValue { mask: TagMask::empty(), constant: 1, atoms: 0 }
    }

    pub fn constant(c: i8) -> DerivedValue {
        debug_assert!(c == 1 || c == -1);
        DerivedValue { mask: TagMask::empty(), constant: c, atoms: 0 }
    }

    pub fn from_ordinal(ordinal: usize) -> DerivedValue {
        DerivedValue { mask: TagMask::single(ordinal), constant: 1, atoms: 0 }
    }

    pub fn unknown(atom: u8) -> DerivedValue {
        DerivedValue { mask: TagMask::empty(), constant: 1, atoms: atom }
    }

    pub fn mul(&self, other: &DerivedValue) -> DerivedValue {
        DerivedValue {
            mask: self.mask.xor(&other.mask),
            constant: self.constant * other.constant,
            atoms: self.atoms ^ other.atoms,
        }
    }

    /// True when no unknown atom survives.
    pub fn is_defined(&self) -> bool {
        self.atoms == 0
    }

    /// Evaluate on a shot. Unknown atoms are ignored (+1 convention); check
    /// [`is_defined`](Self::is_defined) to know whether that happened.
    pub fn eval(&self, bits: &OutcomeBits) -> i8 {
        if self.mask.overlap_parity(bits.mask()) {
            -self.constant
        } else {
            self.constant
        }
    }

    /// Whether flipping the outcomes in `flips` flips this value.
    pub fn flips_under(&self, flips: &TagMask) -> bool {
        self.mask.overlap_parity(flips)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use floqsim_core::MeasRecord;

    #[test]
    fn masks_xor_and_evaluate() {
        let rec = MeasRecord::from_outcomes(vec![1, -1, -1, 1]);
        let bits = OutcomeBits::from_record(&rec).unwrap();
        let a = DerivedValue::from_ordinal(0);
        let b = DerivedValue::from_ordinal(1);
        let c = DerivedValue::from_ordinal(2);
        assert_eq!(a.eval(&bits), 1);
        assert_eq!(b.eval(&bits), -1);
        assert_eq!(b.mul(&c).eval(&bits), 1);
        assert_eq!(a.mul(&b).mul(&DerivedValue::constant(-1)).eval(&bits), 1);
        // squaring cancels
        assert_eq!(b.mul(&b), DerivedValue::one());
    }

    #[test]
    fn atoms_cancel_in_pairs() {
        let u = DerivedValue::unknown(atoms::GZ0);
        assert!(!u.is_defined());
        assert!(u.mul(&u).is_defined());
        let v = u.mul(&DerivedValue::unknown(atoms::Z12_0));
        assert_eq!(v.atoms, atoms::GZ0 | atoms::Z12_0);
        assert!(v.mul(&u).atoms == atoms::Z12_0);
    }

    #[test]
    fn flip_transfer_matches_eval() {
        let rec = MeasRecord::from_outcomes(vec![1, 1, -1]);
        let bits = OutcomeBits::from_record(&rec).unwrap();
        let v = DerivedValue::from_ordinal(0).mul(&DerivedValue::from_ordinal(2));
        let mut flips = TagMask::empty();
        flips.toggle(0);
        assert!(v.flips_under(&flips));
        // flipping ordinal 0 in the record flips the evaluated value
        let rec2 = MeasRecord::from_outcomes(vec![-1, 1, -1]);
        let bits2 = OutcomeBits::from_record(&rec2).unwrap();
        assert_eq!(v.eval(&bits), -v.eval(&bits2));
        flips.toggle(1);
        assert!(v.flips_under(&flips));
        let mut both = TagMask::empty();
        both.toggle(0);
        both.toggle(2);
        assert!(!v.flips_under(&both));
    }

    #[test]
    fn ordinal_listing_round_trips() {
        let m = TagMask::single(3).xor(&TagMask::single(130));
        assert_eq!(m.ordinals(), vec![3, 130]);
        assert!(m.xor(&m).is_empty());
    }
}
