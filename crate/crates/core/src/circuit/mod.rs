//! Gate-level model of the streaming QFT circuit.
//!
//! The register holds `n` photons and one atom. Basis index bit `n` is the
//! atom (most significant) and photon `j` (1-based) sits at bit `n − j`, so
//! for the atom in `|0⟩` the register index equals the input integer
//! `x = x₁x₂⋯xₙ` with `x₁` most significant. Polarisation `|H⟩, |V⟩` maps to
//! `|0⟩_p, |1⟩_p` and spin `|↑⟩, |↓⟩` to `|0⟩_a, |1⟩_a`.

mod channels;
mod program;
mod qft;
mod state;

pub use channels::{
    dephasing_channel, lossy_reflection, noisy_hadamard, simulate_noisy, NoiseModel, NoisyRun,
};
pub use program::{build_qft_program, swap_from_cr1, CircuitProgram, GateOp};
pub use qft::{
    embed_qft_output, ideal_qft_unitary, output_wire, program_unitary, read_qft_output,
    simulate_program,
};
pub use state::{DensityMatrix, QuantumState, StateVector, DENSITY_QUBIT_CAP, PURE_QUBIT_CAP};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A qubit of the `n`-photon + atom register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QubitRef {
    Atom,
    /// Photon index, 1-based.
    Photon(usize),
}

impl QubitRef {
    /// Bit position of this qubit in a register of `photons` photons.
    pub fn bit(self, photons: usize) -> Result<usize> {
        match self {
            QubitRef::Atom => Ok(photons),
            QubitRef::Photon(j) if (1..=photons).contains(&j) => Ok(photons - j),
            QubitRef::Photon(j) => Err(Error::ArityMismatch {
                expected: photons,
                actual: j,
            }),
        }
    }
}

impl std::fmt::Display for QubitRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QubitRef::Atom => write!(f, "a"),
            QubitRef::Photon(j) => write!(f, "p{j}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_layout() {
        assert_eq!(QubitRef::Atom.bit(3).unwrap(), 3);
        assert_eq!(QubitRef::Photon(1).bit(3).unwrap(), 2);
        assert_eq!(QubitRef::Photon(3).bit(3).unwrap(), 0);
        assert!(QubitRef::Photon(4).bit(3).is_err());
        assert!(QubitRef::Photon(0).bit(3).is_err());
    }
}
