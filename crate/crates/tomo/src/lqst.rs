//! Logical state tomography from nine two-qubit basis histograms.

use std::collections::BTreeMap;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::basis::{axis_from_char, basis_label, outcome_projector, BASIS_AXES};
use crate::state::{pauli_combination, project_to_state, DensityMatrix};
use crate::TomoError;

/// Outcome histograms keyed by basis label ("ZZ", "XY", ...), counts in
/// order [n--, n-+, n+-, n++] with the static qubit's sign first.
pub type BasisCounts = BTreeMap<String, [u64; 4]>;

/// Sign pair for a histogram slot.
fn slot_signs(k: usize) -> (i8, i8) {
    let s = if k & 2 != 0 { 1 } else { -1 };
    let d = if k & 1 != 0 { 1 } else { -1 };
    (s, d)
}

/// Index of a sign pair in a histogram.
pub fn slot_of(s: i8, d: i8) -> usize {
    let hi = usize::from(s > 0) << 1;
    hi | usize::from(d > 0)
}

fn parse_basis(label: &str) -> Result<(usize, usize), TomoError> {
    let mut chars = label.chars();
    let (Some(a), Some(b), None) = (chars.next(), chars.next(), chars.next()) else {
        return Err(TomoError::UnknownBasis(label.to_string()));
    };
    match (axis_from_char(a), axis_from_char(b)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(TomoError::UnknownBasis(label.to_string())),
    }
}

/// Least-squares state reconstruction: linear inversion of the basis
/// statistics, projection onto the density-matrix set, and one projected
/// gradient refinement pass. Deterministic for fixed input.
pub fn lqst(counts: &BasisCounts) -> Result<DensityMatrix, TomoError> {
    for key in counts.keys() {
        parse_basis(key)?;
    }
    let mut freqs: Vec<(usize, usize, [f64; 4])> = Vec::with_capacity(9);
    for &a in &BASIS_AXES {
        for &b in &BASIS_AXES {
            let label = basis_label(a, b);
            let hist = counts
                .get(&label)
                .ok_or_else(|| TomoError::MissingBasis(label.clone()))?;
            let total: u64 = hist.iter().sum();
            if total == 0 {
                return Err(TomoError::EmptyHistogram(label));
            }
            let mut f = [0.0; 4];
            for (slot, &n) in f.iter_mut().zip(hist) {
                *slot = n as f64 / total as f64;
            }
            freqs.push((a, b, f));
        }
    }

    // Linear inversion. Joint correlators come from their own basis; each
    // marginal is measured in three bases and averaged, which is the
    // least-squares solution of the full linear model.
    let mut p = [0.0; 16];
    p[0] = 1.0;
    let mut marg_s = [0.0; 4];
    let mut marg_d = [0.0; 4];
    for &(a, b, f) in &freqs {
        let mut e_sd = 0.0;
        let mut e_s = 0.0;
        let mut e_d = 0.0;
        for (k, &fk) in f.iter().enumerate() {
            let (s, d) = slot_signs(k);
            e_sd += f64::from(s) * f64::from(d) * fk;
            e_s += f64::from(s) * fk;
            e_d += f64::from(d) * fk;
        }
        p[4 * a + b] = e_sd;
        marg_s[a] += e_s / 3.0;
        marg_d[b] += e_d / 3.0;
    }
    for &a in &BASIS_AXES {
        p[4 * a] = marg_s[a];
        p[a] = marg_d[a];
    }

    let rho = project_to_state(&pauli_combination(&p))?;
    Ok(refine(rho, &freqs))
}

/// One projected gradient pass on the squared deviation between predicted
/// and observed outcome frequencies, with an exact line search.
fn refine(rho: DensityMatrix, freqs: &[(usize, usize, [f64; 4])]) -> DensityMatrix {
    let mut grad = Matrix4::<Complex64>::zeros();
    let mut residuals: Vec<(Matrix4<Complex64>, f64)> = Vec::with_capacity(36);
    for &(a, b, f) in freqs {
        for (k, &fk) in f.iter().enumerate() {
            let (s, d) = slot_signs(k);
            let proj = outcome_projector(a, b, s, d);
            let predicted = (rho.matrix() * proj).trace().re;
            let r = predicted - fk;
            grad += proj.map(|e| e * Complex64::new(2.0 * r, 0.0));
            residuals.push((proj, r));
        }
    }
    let dir = -grad;
    let mut num = 0.0;
    let mut den = 0.0;
    for (proj, r) in &residuals {
        let c = (dir * proj).trace().re;
        num += r * c;
        den += c * c;
    }
    if den < 1e-18 {
        return rho;
    }
    let step = -num / den;
    let moved = rho.matrix() + dir.map(|e| e * Complex64::new(step, 0.0));
    match project_to_state(&moved) {
        Ok(better) => better,
        Err(_) => rho,
    }
}

/// Parses histograms from a JSON object {"XZ": [n, n, n, n], ...}.
pub fn counts_from_json(text: &str) -> Result<BasisCounts, TomoError> {
    let raw: BTreeMap<String, Vec<u64>> =
        serde_json::from_str(text).map_err(|e| TomoError::BadJson(e.to_string()))?;
    let mut out = BasisCounts::new();
    for (key, values) in raw {
        parse_basis(&key)?;
        let arr: [u64; 4] = values
            .try_into()
            .map_err(|_| TomoError::BadJson(format!("basis {key} needs 4 counts")))?;
        out.insert(key, arr);
    }
    Ok(out)
}

/// Serializes histograms to a JSON object with sorted keys.
pub fn counts_to_json(counts: &BasisCounts) -> String {
    serde_json::to_string_pretty(counts).expect("histogram map serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::trace_distance;
    use nalgebra::Vector4;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn exact_counts(rho: &DensityMatrix, shots: u64) -> BasisCounts {
        let mut counts = BasisCounts::new();
        for &a in &BASIS_AXES {
            for &b in &BASIS_AXES {
                let mut hist = [0u64; 4];
                for (k, slot) in hist.iter_mut().enumerate() {
                    let (s, d) = slot_signs(k);
                    let p = (rho.matrix() * outcome_projector(a, b, s, d)).trace().re;
                    *slot = (p.max(0.0) * shots as f64).round() as u64;
                }
                counts.insert(basis_label(a, b), hist);
            }
        }
        counts
    }

    #[test]
    fn exact_zero_zero_statistics_reconstruct_the_projector() {
        let rho = DensityMatrix::pure(&Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0))).unwrap();
        let counts = exact_counts(&rho, 1_000_000);
        let got = lqst(&counts).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert!(
                    (got.matrix()[(i, j)] - c(want)).norm() < 1e-6,
                    "entry {i},{j}"
                );
            }
        }
    }

    #[test]
    fn exact_bell_statistics_reconstruct_the_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&Vector4::new(c(s), c(0.0), c(0.0), c(s))).unwrap();
        let counts = exact_counts(&rho, 4_000_000);
        let got = lqst(&counts).unwrap();
        assert!(trace_distance(&got, &rho) < 1e-6);
        assert!(got.fidelity_to(&rho) > 1.0 - 1e-6);
    }

    #[test]
    fn slot_order_puts_the_static_sign_first() {
        assert_eq!(slot_of(-1, -1), 0);
        assert_eq!(slot_of(-1, 1), 1);
        assert_eq!(slot_of(1, -1), 2);
        assert_eq!(slot_of(1, 1), 3);
    }

    #[test]
    fn missing_and_empty_bases_are_rejected() {
        let rho = DensityMatrix::pure(&Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0))).unwrap();
        let mut counts = exact_counts(&rho, 1000);
        counts.remove("XY");
        assert!(matches!(lqst(&counts), Err(TomoError::MissingBasis(b)) if b == "XY"));
        let mut counts = exact_counts(&rho, 1000);
        counts.insert("XY".into(), [0, 0, 0, 0]);
        assert!(matches!(lqst(&counts), Err(TomoError::EmptyHistogram(b)) if b == "XY"));
        let mut counts = exact_counts(&rho, 1000);
        counts.insert("QZ".into(), [1, 0, 0, 0]);
        assert!(matches!(lqst(&counts), Err(TomoError::UnknownBasis(_))));
    }

    #[test]
    fn histograms_round_trip_through_json() {
        let rho = DensityMatrix::pure(&Vector4::new(c(0.6), c(0.8), c(0.0), c(0.0))).unwrap();
        let counts = exact_counts(&rho, 5000);
        let text = counts_to_json(&counts);
        let back = counts_from_json(&text).unwrap();
        assert_eq!(counts, back);
        assert!(counts_from_json("{\"ZZ\": [1, 2, 3]}").is_err());
        assert!(counts_from_json("{\"AB\": [1, 2, 3, 4]}").is_err());
    }

    #[test]
    fn reconstruction_is_always_a_physical_state() {
        // Deliberately inconsistent histograms still produce a valid state.
        let mut counts = BasisCounts::new();
        for &a in &BASIS_AXES {
            for &b in &BASIS_AXES {
                counts.insert(basis_label(a, b), [997, 1, 1, 1]);
            }
        }
        let rho = lqst(&counts).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-9);
        assert!(rho.purity() <= 1.0 + 1e-9);
    }
}
