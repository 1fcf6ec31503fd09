//! Per-shot measurement records.
//!
//! Outcomes are stored densely in measurement order (the order of
//! MeasurePauli instructions in the circuit); tag lookup goes through the
//! circuit's tag table. Keeping the per-shot payload a plain Vec<i8> is
//! what lets million-shot runs stay allocation-light.

use crate::circuit::Circuit;
use crate::CoreError;

/// Outcomes of one executed shot, +1/-1 per measurement in circuit order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MeasRecord {
    outcomes: Vec<i8>,
}

impl MeasRecord {
    pub fn with_capacity(n: usize) -> MeasRecord {
        MeasRecord {
            outcomes: Vec::with_capacity(n),
        }
    }

    pub fn from_outcomes(outcomes: Vec<i8>) -> MeasRecord {
        MeasRecord { outcomes }
    }

    pub fn push(&mut self, outcome: i8) {
        debug_assert!(outcome == 1 || outcome == -1);
        self.outcomes.push(outcome);
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Outcome by measurement ordinal.
    pub fn get(&self, ordinal: usize) -> Result<i8, CoreError> {
        self.outcomes
            .get(ordinal)
            .copied()
            .ok_or(CoreError::RecordOutOfRange(ordinal, self.outcomes.len()))
    }

    /// Outcome by tag, resolved through the circuit that produced the shot.
    pub fn value(&self, circuit: &Circuit, tag: &str) -> Result<i8, CoreError> {
        self.get(circuit.tag_ordinal(tag)?)
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.outcomes
    }

    /// (tag, outcome) pairs in circuit order.
    pub fn tagged<'a>(&'a self, circuit: &'a Circuit) -> impl Iterator<Item = (&'a str, i8)> + 'a {
        circuit
            .measurement_tags()
            .zip(self.outcomes.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    #[test]
    fn lookup_by_tag_and_ordinal() {
        let mut c = Circuit::new(2);
        c.measure(PauliString::z_on(2, &[0]).unwrap(), "a").unwrap();
        c.measure(PauliString::z_on(2, &[1]).unwrap(), "b").unwrap();
        let r = MeasRecord::from_outcomes(vec![1, -1]);
        assert_eq!(r.value(&c, "a").unwrap(), 1);
        assert_eq!(r.value(&c, "b").unwrap(), -1);
        assert!(r.value(&c, "c").is_err());
        assert_eq!(r.get(1).unwrap(), -1);
        assert!(r.get(2).is_err());
        let pairs: Vec<(&str, i8)> = r.tagged(&c).collect();
        assert_eq!(pairs, [("a", 1), ("b", -1)]);
    }
}
