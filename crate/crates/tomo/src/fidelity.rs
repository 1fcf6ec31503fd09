//! Process and gate fidelity formulas.

use crate::process::TransferMatrix;

/// Process fidelity F_p = Tr(R_ideal^T R_exp) / 16, normalized so that
/// ideal against ideal gives 1, and the derived average gate fidelity
/// F_g = (4 F_p + 1) / 5 for two logical qubits.
pub fn process_and_gate_fidelity(r_exp: &TransferMatrix, r_ideal: &TransferMatrix) -> (f64, f64) {
    let fp = (r_ideal.matrix().transpose() * r_exp.matrix()).trace() / 16.0;
    let fg = (4.0 * fp + 1.0) / 5.0;
    (fp, fg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{ideal_cnot_ptm, ideal_identity_ptm, TransferMatrix};

    #[test]
    fn ideal_against_itself_is_one() {
        let cnot = ideal_cnot_ptm();
        let (fp, fg) = process_and_gate_fidelity(&cnot, &cnot);
        assert!((fp - 1.0).abs() < 1e-12);
        assert!((fg - 1.0).abs() < 1e-12);
    }

    #[test]
    fn the_reference_pair_maps_as_published() {
        let fp = 0.802f64;
        let fg = (4.0 * fp + 1.0) / 5.0;
        assert!((fg - 0.8416).abs() < 1e-12);
    }

    #[test]
    fn cnot_against_identity_shares_four_axes() {
        let (fp, _) = process_and_gate_fidelity(&ideal_cnot_ptm(), &ideal_identity_ptm());
        assert!((fp - 0.25).abs() < 1e-12);
    }

    #[test]
    fn scaling_the_experiment_scales_the_fidelity() {
        let ideal = ideal_cnot_ptm();
        let damped = TransferMatrix::from_matrix(ideal.matrix() * 0.5);
        let (fp, fg) = process_and_gate_fidelity(&damped, &ideal);
        assert!((fp - 0.5).abs() < 1e-12);
        assert!((fg - (4.0 * 0.5 + 1.0) / 5.0).abs() < 1e-12);
    }
}
