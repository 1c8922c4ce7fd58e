//! Checks the budget against full noisy density-matrix simulation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::budget::BudgetModel;
use super::budget::{GateQuality, NoiseBudget};
use crate::circuit::{
    build_qft_program, simulate_noisy, simulate_program, DensityMatrix, NoiseModel, QuantumState,
    StateVector,
};
use crate::error::{Error, Result};
use crate::linalg::trace_distance;
use crate::scheduler::{compile_timeline, timeline_to_program, TimingConfig};

/// Random photon input states tried on top of the basis states.
pub const RANDOM_INPUTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub inputs: usize,
    /// `D` from the budget.
    pub bound: f64,
    pub max_trace_distance: f64,
    /// `D − max_trace_distance`
    pub margin: f64,
    /// Input that reached the maximum: `basis:x` or `random:i`.
    pub worst_input: String,
}

/// The noise model the budget terms describe, for `n` photons.
pub fn noise_model(model: &BudgetModel) -> NoiseModel {
    let reflection_loss: BTreeMap<u32, (f64, f64)> = model
        .gates
        .iter()
        .map(|g| (g.k, (g.r_up_abs, g.r_down_abs)))
        .collect();
    NoiseModel {
        atom_hadamard_error: model.budget.p,
        photon_hadamard_error: 0.0,
        t2_ns: model.budget.t2_us * 1e3,
        reflection_loss,
    }
}

fn random_photon_state(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Runs the scheduled protocol with noise on every basis input and
/// [`RANDOM_INPUTS`] seeded random inputs and compares each output with the
/// ideal untruncated transform.
///
/// Gate times come from the compiled timeline, so the atom dephases for the
/// real wall-clock time between its operations.
pub fn validate_bound_small_n(n: usize, budget: &NoiseBudget, seed: u64) -> Result<BoundReport> {
    let model = BudgetModel::new(*budget, n)?;
    let bound = model.report(n)?.total;
    let cutoff = match budget.gates {
        GateQuality::Ideal => n as u32,
        GateQuality::Cavity { .. } => budget.cutoff.min(n as u32),
    };
    let timeline = compile_timeline(&TimingConfig::with_defaults(n, budget.t_cycle_ns)?, cutoff)?;
    let program = timeline_to_program(&timeline)?;
    let times: Vec<f64> = timeline.timed_gates().into_iter().map(|(t, _)| t).collect();
    let ideal = build_qft_program(n, n as u32)?;
    let noise = noise_model(&model);

    let mut inputs: Vec<(String, StateVector)> = (0..1usize << n)
        .map(|x| Ok((format!("basis:{x}"), StateVector::from_photon_bits(n, x)?)))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..RANDOM_INPUTS {
        let amps = random_photon_state(n, &mut rng);
        inputs.push((
            format!("random:{i}"),
            StateVector::from_photon_amplitudes(n, &amps)?,
        ));
    }

    let mut worst = (f64::NEG_INFINITY, String::new());
    for (label, psi) in &inputs {
        let noisy = simulate_noisy(
            &program,
            DensityMatrix::from_pure(psi)?,
            &noise,
            Some(&times),
        )?;
        let target = simulate_program(&ideal, QuantumState::Pure(psi.clone()))?.to_density()?;
        let d = trace_distance(&noisy.state.to_matrix(), &target.to_matrix());
        if d > worst.0 {
            worst = (d, label.clone());
        }
    }
    let report = BoundReport {
        n,
        inputs: inputs.len(),
        bound,
        max_trace_distance: worst.0,
        margin: bound - worst.0,
        worst_input: worst.1,
    };
    if report.max_trace_distance > bound + 1e-12 {
        return Err(Error::BoundViolation {
            observed: report.max_trace_distance,
            bound,
            context: format!("n = {n}, input {}", report.worst_input),
        });
    }
    Ok(report)
}
