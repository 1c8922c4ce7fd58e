//! Closed-form diamond distances of the individual error sources.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Memory error per idle cycle: `½(1 − e^{−T_cycle/T₂})`.
///
/// Both durations share a unit. `t2 = ∞` gives 0.
pub fn term_dp(t_cycle: f64, t2: f64) -> f64 {
    0.5 * (1.0 - (-t_cycle / t2).exp())
}

/// Distance of a dropped `CR_k` from identity, `½|1 − e^{i2π/2^k}| = sin(π/2^k)`.
pub fn term_dk_star(k: u32) -> f64 {
    (PI / 2f64.powi(k as i32)).sin()
}

/// Post-selection error of a lossy reflection, `(1 − m)/(1 + m)` with
/// `m = min(|r_↑|, |r_↓|)`.
pub fn term_dk(r_up: Complex64, r_down: Complex64) -> f64 {
    let m = r_up.norm().min(r_down.norm()).min(1.0);
    (1.0 - m) / (1.0 + m)
}

/// Large-cooperativity approximation `1/(2C² + 8Δ²/κ²)`, `Δ` the smaller
/// detuning magnitude.
pub fn term_dk_approx(cooperativity: f64, delta: f64, kappa: f64) -> f64 {
    1.0 / (2.0 * cooperativity * cooperativity + 8.0 * delta * delta / (kappa * kappa))
}

/// Diagonal of a post-selection operator, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDiag(Vec<f64>);

impl MeasurementDiag {
    /// Sorts `entries` descending; rejects empty, negative or non-finite input.
    pub fn new(mut entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParams(
                "measurement operator has no entries".into(),
            ));
        }
        if let Some(x) = entries.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidParams(format!(
                "diagonal entry {x} must be finite and >= 0"
            )));
        }
        entries.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(entries))
    }

    /// `diag(1, 1, |r_↑|, |r_↓|)` for one reflection.
    pub fn reflection(r_up: Complex64, r_down: Complex64) -> Result<Self> {
        Self::new(vec![1.0, 1.0, r_up.norm(), r_down.norm()])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn min(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

/// `(λ₁ − λₙ)/(λ₁ + λₙ)` from the extreme eigenvalues.
pub fn postselection_distance(m: &MeasurementDiag) -> Result<f64> {
    let (hi, lo) = (m.max(), m.min());
    if hi <= 0.0 {
        return Err(Error::DegenerateOperator);
    }
    Ok((hi - lo) / (hi + lo))
}
