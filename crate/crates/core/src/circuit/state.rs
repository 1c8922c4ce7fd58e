use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{GateOp, QubitRef};
use crate::cavity::cr_phase;
use crate::error::{Error, Result};
use crate::linalg;

/// Largest register (photons + atom) the pure-state simulator accepts.
pub const PURE_QUBIT_CAP: usize = 20;
/// Largest register the density-matrix simulator accepts.
pub const DENSITY_QUBIT_CAP: usize = 8;

const NORM_TOL: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) const HADAMARD: Mat2 = [
    [c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)],
    [c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)],
];

/// Elementary index-level operations a gate decomposes into.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Action {
    Single {
        bit: usize,
        u: Mat2,
    },
    /// Phase on indices where both bits are set.
    ControlledPhase {
        a: usize,
        b: usize,
        phase: Complex64,
    },
    /// Phase on indices where `bit` is set.
    Phase {
        bit: usize,
        phase: Complex64,
    },
    Swap {
        a: usize,
        b: usize,
    },
}

pub(crate) fn gate_actions(gate: &GateOp, photons: usize) -> Result<Vec<Action>> {
    let atom = QubitRef::Atom.bit(photons)?;
    let p = |j: usize| QubitRef::Photon(j).bit(photons);
    Ok(match *gate {
        GateOp::HadamardAtom => vec![Action::Single {
            bit: atom,
            u: HADAMARD,
        }],
        GateOp::HadamardPhoton(j) => vec![Action::Single {
            bit: p(j)?,
            u: HADAMARD,
        }],
        GateOp::HadamardPair(j) => vec![
            Action::Single {
                bit: atom,
                u: HADAMARD,
            },
            Action::Single {
                bit: p(j)?,
                u: HADAMARD,
            },
        ],
        GateOp::ControlledPhase { k, photon } => vec![Action::ControlledPhase {
            a: atom,
            b: p(photon)?,
            phase: Complex64::from_polar(1.0, cr_phase(k)),
        }],
        GateOp::Swap(j) => vec![Action::Swap { a: atom, b: p(j)? }],
        GateOp::PhaseFix { photon, angle } => vec![Action::Phase {
            bit: p(photon)?,
            phase: Complex64::from_polar(1.0, angle),
        }],
    })
}

fn check_cap(kind: &'static str, photons: usize, cap: usize) -> Result<()> {
    let qubits = photons + 1;
    if qubits > cap {
        return Err(Error::CapExceeded { kind, qubits, cap });
    }
    Ok(())
}

fn swap_bits(i: usize, a: usize, b: usize) -> usize {
    let (ba, bb) = ((i >> a) & 1, (i >> b) & 1);
    if ba == bb {
        i
    } else {
        i ^ (1 << a) ^ (1 << b)
    }
}

/// Pure state of `photons` photons plus the atom.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    photons: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `index` (atom is the top bit).
    pub fn basis(photons: usize, index: usize) -> Result<Self> {
        check_cap("pure-state", photons, PURE_QUBIT_CAP)?;
        let dim = 1usize << (photons + 1);
        if index >= dim {
            return Err(Error::InvalidParams(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::default(); dim];
        amps[index] = c(1.0);
        Ok(Self { photons, amps })
    }

    /// `|x₁⋯xₙ⟩_p ⊗ |0⟩_a`.
    pub fn from_photon_bits(photons: usize, x: usize) -> Result<Self> {
        if x >= 1 << photons {
            return Err(Error::InvalidParams(format!(
                "input {x} does not fit in {photons} photons"
            )));
        }
        Self::basis(photons, x)
    }

    /// Photon amplitudes (length `2ⁿ`, unit norm) tensored with the atom in `|0⟩`.
    pub fn from_photon_amplitudes(photons: usize, photon_amps: &[Complex64]) -> Result<Self> {
        check_cap("pure-state", photons, PURE_QUBIT_CAP)?;
        if photon_amps.len() != 1 << photons {
            return Err(Error::ArityMismatch {
                expected: photons,
                actual: photon_amps.len().trailing_zeros() as usize,
            });
        }
        let mut amps = photon_amps.to_vec();
        amps.resize(1 << (photons + 1), Complex64::default());
        Self::from_amplitudes(photons, amps)
    }

    /// Full-register amplitudes; must have unit norm.
    pub fn from_amplitudes(photons: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_cap("pure-state", photons, PURE_QUBIT_CAP)?;
        if amps.len() != 1 << (photons + 1) {
            return Err(Error::InvalidParams(format!(
                "expected {} amplitudes, got {}",
                1usize << (photons + 1),
                amps.len()
            )));
        }
        let s = Self { photons, amps };
        if (s.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParams(format!(
                "state norm {} is not 1",
                s.norm()
            )));
        }
        Ok(s)
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn num_qubits(&self) -> usize {
        self.photons + 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        for action in gate_actions(gate, self.photons)? {
            self.apply_action(action);
        }
        Ok(())
    }

    pub(crate) fn apply_action(&mut self, action: Action) {
        match action {
            Action::Single { bit, u } => {
                let mask = 1 << bit;
                for i0 in 0..self.amps.len() {
                    if i0 & mask != 0 {
                        continue;
                    }
                    let i1 = i0 | mask;
                    let (a0, a1) = (self.amps[i0], self.amps[i1]);
                    self.amps[i0] = u[0][0] * a0 + u[0][1] * a1;
                    self.amps[i1] = u[1][0] * a0 + u[1][1] * a1;
                }
            }
            Action::ControlledPhase { a, b, phase } => {
                let mask = (1 << a) | (1 << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp *= phase;
                    }
                }
            }
            Action::Phase { bit, phase } => {
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if (i >> bit) & 1 == 1 {
                        *amp *= phase;
                    }
                }
            }
            Action::Swap { a, b } => {
                for i in 0..self.amps.len() {
                    let j = swap_bits(i, a, b);
                    if j > i {
                        self.amps.swap(i, j);
                    }
                }
            }
        }
    }
}

/// Mixed state of `photons` photons plus the atom, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    photons: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        check_cap("density-matrix", psi.photons, DENSITY_QUBIT_CAP)?;
        let dim = psi.dim();
        let mut data = vec![Complex64::default(); dim * dim];
        for (r, a) in psi.amps.iter().enumerate() {
            for (col, b) in psi.amps.iter().enumerate() {
                data[r * dim + col] = a * b.conj();
            }
        }
        Ok(Self {
            photons: psi.photons,
            dim,
            data,
        })
    }

    /// Builds from a square matrix without validation (the result may be
    /// unnormalised).
    pub fn from_matrix(photons: usize, m: &DMatrix<Complex64>) -> Result<Self> {
        check_cap("density-matrix", photons, DENSITY_QUBIT_CAP)?;
        let dim = 1 << (photons + 1);
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::InvalidParams(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let data = (0..dim * dim).map(|i| m[(i / dim, i % dim)]).collect();
        Ok(Self { photons, dim, data })
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn num_qubits(&self) -> usize {
        self.photons + 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |r, col| self.get(r, col))
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for r in 0..self.dim {
            for col in r..self.dim {
                if (self.get(r, col) - self.get(col, r).conj()).norm() > tol {
                    return Err(Error::InvalidParams(format!(
                        "not Hermitian at ({r}, {col})"
                    )));
                }
            }
        }
        if (self.trace() - 1.0).abs() > tol {
            return Err(Error::InvalidParams(format!(
                "trace {} is not 1",
                self.trace()
            )));
        }
        let min_eig = linalg::hermitian_eigenvalues(&self.to_matrix())
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::InvalidParams(format!(
                "negative eigenvalue {min_eig}"
            )));
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        for action in gate_actions(gate, self.photons)? {
            self.apply_action(action);
        }
        Ok(())
    }

    pub(crate) fn apply_action(&mut self, action: Action) {
        let dim = self.dim;
        match action {
            Action::Single { bit, u } => {
                let mask = 1 << bit;
                // rows: U ρ
                for col in 0..dim {
                    for i0 in (0..dim).filter(|i| i & mask == 0) {
                        let i1 = i0 | mask;
                        let (a0, a1) = (self.data[i0 * dim + col], self.data[i1 * dim + col]);
                        self.data[i0 * dim + col] = u[0][0] * a0 + u[0][1] * a1;
                        self.data[i1 * dim + col] = u[1][0] * a0 + u[1][1] * a1;
                    }
                }
                // columns: ρ U†
                for r in 0..dim {
                    let row = &mut self.data[r * dim..(r + 1) * dim];
                    for i0 in (0..dim).filter(|i| i & mask == 0) {
                        let i1 = i0 | mask;
                        let (a0, a1) = (row[i0], row[i1]);
                        row[i0] = a0 * u[0][0].conj() + a1 * u[0][1].conj();
                        row[i1] = a0 * u[1][0].conj() + a1 * u[1][1].conj();
                    }
                }
            }
            Action::ControlledPhase { a, b, phase } => {
                let mask = (1 << a) | (1 << b);
                self.apply_diagonal(|i| if i & mask == mask { phase } else { c(1.0) });
            }
            Action::Phase { bit, phase } => {
                self.apply_diagonal(|i| if (i >> bit) & 1 == 1 { phase } else { c(1.0) });
            }
            Action::Swap { a, b } => {
                let old = self.data.clone();
                for r in 0..dim {
                    let pr = swap_bits(r, a, b);
                    for col in 0..dim {
                        self.data[pr * dim + swap_bits(col, a, b)] = old[r * dim + col];
                    }
                }
            }
        }
    }

    /// `ρ → D ρ D†` for diagonal `D`.
    pub(crate) fn apply_diagonal(&mut self, d: impl Fn(usize) -> Complex64) {
        let diag: Vec<Complex64> = (0..self.dim).map(d).collect();
        for r in 0..self.dim {
            for col in 0..self.dim {
                self.data[r * self.dim + col] *= diag[r] * diag[col].conj();
            }
        }
    }

    /// Multiplies every coherence between the two values of `bit` by `factor`.
    pub(crate) fn scale_coherences(&mut self, bit: usize, factor: f64) {
        for r in 0..self.dim {
            for col in 0..self.dim {
                if ((r ^ col) >> bit) & 1 == 1 {
                    self.data[r * self.dim + col] *= factor;
                }
            }
        }
    }

    /// Divides by the trace. Fails when the trace has underflowed.
    pub fn normalize(&mut self) -> Result<f64> {
        let t = self.trace();
        if !(t > f64::MIN_POSITIVE) {
            return Err(Error::ZeroWeight);
        }
        for v in &mut self.data {
            *v /= t;
        }
        Ok(t)
    }

    /// Traces out one qubit, returning the matrix on the remaining qubits
    /// (bit order preserved, the removed bit squeezed out).
    pub fn partial_trace_bit(&self, bit: usize) -> DMatrix<Complex64> {
        let sub = self.dim / 2;
        let insert = |i: usize, b: usize| {
            let low = i & ((1 << bit) - 1);
            let high = (i >> bit) << (bit + 1);
            high | (b << bit) | low
        };
        DMatrix::from_fn(sub, sub, |r, col| {
            (0..2).map(|b| self.get(insert(r, b), insert(col, b))).sum()
        })
    }
}

/// Either representation of a register state.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn photons(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.photons(),
            QuantumState::Mixed(m) => m.photons(),
        }
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        match self {
            QuantumState::Pure(s) => s.apply_gate(gate),
            QuantumState::Mixed(m) => m.apply_gate(gate),
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        match self {
            QuantumState::Pure(s) => DensityMatrix::from_pure(s),
            QuantumState::Mixed(m) => Ok(m.clone()),
        }
    }
}

impl From<StateVector> for QuantumState {
    fn from(s: StateVector) -> Self {
        QuantumState::Pure(s)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(m: DensityMatrix) -> Self {
        QuantumState::Mixed(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::basis(1, 0).unwrap();
        s.apply_gate(&GateOp::HadamardPhoton(1)).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((a[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(a[2], c(0.0));
    }

    #[test]
    fn cr1_flips_sign_of_11() {
        // photon 1 = bit 0, atom = bit 1
        let mut s = StateVector::basis(1, 0b11).unwrap();
        s.apply_gate(&GateOp::ControlledPhase { k: 1, photon: 1 })
            .unwrap();
        assert!((s.amplitudes()[3] + c(1.0)).norm() < 1e-15);
        for idx in 0..3 {
            for k in 1..6 {
                let mut s = StateVector::basis(1, idx).unwrap();
                s.apply_gate(&GateOp::ControlledPhase { k, photon: 1 })
                    .unwrap();
                assert_eq!(s.amplitudes()[idx], c(1.0));
            }
        }
    }

    #[test]
    fn swap_moves_excitation() {
        let mut s = StateVector::basis(2, 0b001).unwrap(); // photon 2 = 1
        s.apply_gate(&GateOp::Swap(2)).unwrap();
        assert_eq!(s.amplitudes()[0b100], c(1.0));
    }

    #[test]
    fn arity_mismatch() {
        let mut s = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&GateOp::HadamardPhoton(3)),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn caps() {
        assert!(matches!(
            StateVector::basis(20, 0),
            Err(Error::CapExceeded { .. })
        ));
        let s = StateVector::basis(8, 0).unwrap();
        assert!(matches!(
            DensityMatrix::from_pure(&s),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn rejects_unnormalised_amplitudes() {
        assert!(StateVector::from_amplitudes(0, vec![c(1.0), c(1.0)]).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        // photon 1 in |+>, atom in |1>
        let h = FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(1, vec![c(0.0), c(0.0), c(h), c(h)]).unwrap();
        let rho = DensityMatrix::from_pure(&s).unwrap();
        let photon = rho.partial_trace_bit(1);
        for r in 0..2 {
            for col in 0..2 {
                assert!((photon[(r, col)] - c(0.5)).norm() < 1e-15);
            }
        }
        let atom = rho.partial_trace_bit(0);
        assert!((atom[(1, 1)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn density_follows_pure_evolution() {
        let mut psi = StateVector::from_photon_bits(2, 0b10).unwrap();
        let mut rho = DensityMatrix::from_pure(&psi).unwrap();
        for g in super::super::build_qft_program(2, 2).unwrap().gates() {
            psi.apply_gate(g).unwrap();
            rho.apply_gate(g).unwrap();
        }
        let expected = DensityMatrix::from_pure(&psi).unwrap();
        for (a, b) in rho.data.iter().zip(&expected.data) {
            assert!((a - b).norm() < 1e-12);
        }
        rho.validate(1e-12).unwrap();
    }
}
