//! Noise channels whose distances to their ideal counterparts are the
//! error-budget terms: pure dephasing (`½(1 − e^{−t/T₂})`), a Hadamard
//! followed by a probabilistic phase flip (`p`), and cavity reflection loss
//! modelled as an ideal `CR_k` followed by post-selection on no loss.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::state::{gate_actions, Action, HADAMARD};
use super::{CircuitProgram, DensityMatrix, GateOp, QubitRef};
use crate::error::{Error, Result};

/// Multiplies the qubit's coherences by `e^{−t/T₂}`. An infinite `t2`
/// leaves the state unchanged.
pub fn dephasing_channel(
    mut rho: DensityMatrix,
    qubit: QubitRef,
    t: f64,
    t2: f64,
) -> Result<DensityMatrix> {
    if !(t >= 0.0 && t.is_finite() || t == f64::INFINITY) {
        return Err(Error::InvalidParams(format!(
            "dephasing time {t} must be non-negative"
        )));
    }
    if !(t2 > 0.0) {
        return Err(Error::InvalidParams(format!("T2 {t2} must be positive")));
    }
    let bit = qubit.bit(rho.photons())?;
    rho.scale_coherences(bit, (-t / t2).exp());
    Ok(rho)
}

/// Hadamard on `qubit`, then `Z` with probability `p`.
pub fn noisy_hadamard(mut rho: DensityMatrix, qubit: QubitRef, p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let bit = qubit.bit(rho.photons())?;
    rho.apply_action(Action::Single { bit, u: HADAMARD });
    rho.scale_coherences(bit, 1.0 - 2.0 * p);
    Ok(rho)
}

/// Ideal `CR_k` between the atom and `photon`, then `ρ → MρM†` with
/// `M = diag(1, 1, |r_↑|, |r_↓|)` over `|photon, atom⟩`.
///
/// Returns the unnormalised state and its trace, the post-selection weight.
pub fn lossy_reflection(
    mut rho: DensityMatrix,
    k: u32,
    photon: usize,
    r_up: f64,
    r_down: f64,
) -> Result<(DensityMatrix, f64)> {
    for r in [r_up, r_down] {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParams(format!(
                "reflection magnitude {r} outside [0, 1]"
            )));
        }
    }
    rho.apply_gate(&GateOp::ControlledPhase { k, photon })?;
    let n = rho.photons();
    let atom = QubitRef::Atom.bit(n)?;
    let p = QubitRef::Photon(photon).bit(n)?;
    rho.apply_diagonal(|i| {
        let m = match ((i >> p) & 1, (i >> atom) & 1) {
            (0, _) => 1.0,
            (_, 0) => r_up,
            _ => r_down,
        };
        Complex64::new(m, 0.0)
    });
    let weight = rho.trace();
    if !(weight > f64::MIN_POSITIVE) {
        return Err(Error::ZeroWeight);
    }
    Ok((rho, weight))
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Error parameters applied gate by gate in [`simulate_noisy`].
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    /// Phase-flip probability after every atom Hadamard.
    pub atom_hadamard_error: f64,
    /// Phase-flip probability after every photon Hadamard.
    pub photon_hadamard_error: f64,
    /// Atom dephasing time in ns; `INFINITY` disables dephasing.
    pub t2_ns: f64,
    /// `(|r_↑|, |r_↓|)` per `k`; a missing entry is a lossless reflection.
    pub reflection_loss: BTreeMap<u32, (f64, f64)>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            atom_hadamard_error: 0.0,
            photon_hadamard_error: 0.0,
            t2_ns: f64::INFINITY,
            reflection_loss: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NoisyRun {
    /// Final state, renormalised after every post-selection.
    pub state: DensityMatrix,
    /// Product of all post-selection weights.
    pub weight: f64,
}

/// Runs `program` with `noise` on a density matrix.
///
/// `gate_times` (ns, one per gate, non-decreasing) drives atom dephasing:
/// before each gate the atom dephases for the time elapsed since the previous
/// one. Without times no dephasing is applied.
pub fn simulate_noisy(
    program: &CircuitProgram,
    input: DensityMatrix,
    noise: &NoiseModel,
    gate_times: Option<&[f64]>,
) -> Result<NoisyRun> {
    if input.photons() != program.arity() {
        return Err(Error::ArityMismatch {
            expected: program.arity(),
            actual: input.photons(),
        });
    }
    check_probability(noise.atom_hadamard_error)?;
    check_probability(noise.photon_hadamard_error)?;
    if let Some(times) = gate_times {
        if times.len() != program.len() {
            return Err(Error::InvalidParams(format!(
                "{} gate times for {} gates",
                times.len(),
                program.len()
            )));
        }
    }
    let n = program.arity();
    let mut rho = input;
    let mut weight = 1.0;
    let mut last_time: Option<f64> = None;
    for (i, gate) in program.gates().iter().enumerate() {
        if let Some(times) = gate_times {
            let t = times[i];
            if let Some(prev) = last_time {
                if t < prev {
                    return Err(Error::InvalidParams(
                        "gate times must be non-decreasing".into(),
                    ));
                }
                if t > prev && noise.t2_ns.is_finite() {
                    rho = dephasing_channel(rho, QubitRef::Atom, t - prev, noise.t2_ns)?;
                }
            }
            last_time = Some(t);
        }
        match *gate {
            GateOp::HadamardAtom => {
                rho = noisy_hadamard(rho, QubitRef::Atom, noise.atom_hadamard_error)?
            }
            GateOp::HadamardPhoton(j) => {
                rho = noisy_hadamard(rho, QubitRef::Photon(j), noise.photon_hadamard_error)?
            }
            GateOp::HadamardPair(j) => {
                rho = noisy_hadamard(rho, QubitRef::Atom, noise.atom_hadamard_error)?;
                rho = noisy_hadamard(rho, QubitRef::Photon(j), noise.photon_hadamard_error)?;
            }
            GateOp::ControlledPhase { k, photon } => match noise.reflection_loss.get(&k) {
                Some(&(r_up, r_down)) => {
                    let (mut out, w) = lossy_reflection(rho, k, photon, r_up, r_down)?;
                    out.normalize()?;
                    weight *= w;
                    rho = out;
                }
                None => rho.apply_gate(gate)?,
            },
            GateOp::Swap(_) | GateOp::PhaseFix { .. } => {
                for a in gate_actions(gate, n)? {
                    rho.apply_action(a);
                }
            }
        }
    }
    Ok(NoisyRun { state: rho, weight })
}
