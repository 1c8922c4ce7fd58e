//! Small dense linear-algebra helpers over `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    // Symmetrise first so rounding noise cannot break Hermiticity.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// `½‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b))
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `|ψ⟩⟨ψ|`
pub fn projector(psi: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(psi.len(), psi.len(), |r, c| psi[r] * psi[c].conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_hermitian_spectrum() {
        // Pauli Y has eigenvalues ±1
        let y = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let mut ev = hermitian_eigenvalues(&y);
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_pure_states_are_distance_one() {
        let a = projector(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let b = projector(&[Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)]);
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-14);
    }
}
