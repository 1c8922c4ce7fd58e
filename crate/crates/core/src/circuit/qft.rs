use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CircuitProgram, QuantumState, QubitRef, StateVector};
use crate::error::{Error, Result};

/// `U[y][x] = 2^{−n/2} e^{i2π·x·y/2ⁿ}` over `n` qubits, first qubit most
/// significant.
pub fn ideal_qft_unitary(n: usize) -> Result<DMatrix<Complex64>> {
    if n == 0 || n > 12 {
        return Err(Error::InvalidParams(format!(
            "ideal QFT matrix supported for 1..=12 qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let scale = (dim as f64).sqrt().recip();
    Ok(DMatrix::from_fn(dim, dim, |y, x| {
        let phase = TAU * ((x * y) % dim) as f64 / dim as f64;
        Complex64::from_polar(scale, phase)
    }))
}

/// Register qubit that holds output bit `y_m` (1-based, `y₁` most
/// significant) after the streaming QFT on `n` photons.
///
/// The atom keeps `y₁`; `y_m` for `m ≥ 2` leaves on photon `n − m + 2`; photon
/// 1 carries the atom's initial `|0⟩`. This is the bit-reversed order of the
/// textbook circuit shifted by one photon.
pub fn output_wire(n: usize, m: usize) -> QubitRef {
    assert!((1..=n).contains(&m), "output bit {m} outside 1..={n}");
    if m == 1 {
        QubitRef::Atom
    } else {
        QubitRef::Photon(n - m + 2)
    }
}

fn register_index(n: usize, y: usize) -> usize {
    (1..=n)
        .filter(|m| (y >> (n - m)) & 1 == 1)
        .map(|m| 1usize << output_wire(n, m).bit(n).expect("wire within register"))
        .fold(0, |acc, b| acc | b)
}

/// Places QFT output amplitudes (indexed by `y`) onto the register wires,
/// with photon 1 in `|0⟩`.
pub fn embed_qft_output(n: usize, y_amps: &[Complex64]) -> Result<StateVector> {
    if y_amps.len() != 1 << n {
        return Err(Error::ArityMismatch {
            expected: n,
            actual: y_amps.len().trailing_zeros() as usize,
        });
    }
    let mut amps = vec![Complex64::default(); 1 << (n + 1)];
    for (y, a) in y_amps.iter().enumerate() {
        amps[register_index(n, y)] = *a;
    }
    StateVector::from_amplitudes(n, amps)
}

/// Reads the output register back into `y` order. Also returns the
/// probability found with photon 1 outside `|0⟩`.
pub fn read_qft_output(state: &StateVector) -> (Vec<Complex64>, f64) {
    let n = state.photons();
    let amps = state.amplitudes();
    let y_amps: Vec<Complex64> = (0..1usize << n)
        .map(|y| amps[register_index(n, y)])
        .collect();
    let kept: f64 = y_amps.iter().map(|a| a.norm_sqr()).sum();
    (y_amps, (1.0 - kept).max(0.0))
}

/// Applies every gate of `program` in order.
pub fn simulate_program(program: &CircuitProgram, input: QuantumState) -> Result<QuantumState> {
    if input.photons() != program.arity() {
        return Err(Error::ArityMismatch {
            expected: program.arity(),
            actual: input.photons(),
        });
    }
    let mut state = input;
    for g in program.gates() {
        state.apply_gate(g)?;
    }
    Ok(state)
}

/// Full-register unitary of `program`, built column by column.
pub fn program_unitary(program: &CircuitProgram) -> Result<DMatrix<Complex64>> {
    let n = program.arity();
    let dim = 1usize << (n + 1);
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let QuantumState::Pure(out) =
            simulate_program(program, StateVector::basis(n, col)?.into())?
        else {
            unreachable!("pure input stays pure");
        };
        for (row, a) in out.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    Ok(u)
}
