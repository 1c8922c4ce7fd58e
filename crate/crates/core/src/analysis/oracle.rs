//! Brute-force optimisers used to check the closed-form distances.
//!
//! Neither oracle relies on the closed forms: the post-selection oracle
//! maximises the pure-state trace distance directly, and the channel oracle
//! searches over entangled probe states of a qubit and a one-qubit ancilla.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::terms::MeasurementDiag;
use crate::circuit::{DensityMatrix, StateVector};
use crate::error::{Error, Result};
use crate::linalg::trace_distance;
use crate::params::DEFAULT_SEED;

/// Largest operator dimension the post-selection oracle accepts.
pub const ORACLE_DIM_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    /// Stop a restart once the tangent gradient norm drops below this.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            tol: 1e-8,
            max_iters: 20_000,
            seed: DEFAULT_SEED,
        }
    }
}

/// Best distances found without and with an ancilla of equal dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub plain: f64,
    pub extended: f64,
}

impl OracleOutcome {
    pub fn distance(&self) -> f64 {
        self.plain.max(self.extended)
    }
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    normalize(&mut v);
    v
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

/// `|⟨ψ|φ⟩|²` with `φ = Mψ/‖Mψ‖`, i.e. `a²/b` for `a = ψ†Mψ`, `b = ψ†M²ψ`.
fn overlap(lambda: &[f64], psi: &[Complex64]) -> (f64, f64, f64) {
    let (mut a, mut b) = (0.0, 0.0);
    for (l, z) in lambda.iter().zip(psi) {
        let w = z.norm_sqr();
        a += l * w;
        b += l * l * w;
    }
    let g = if b > 0.0 { a * a / b } else { 0.0 };
    (g, a, b)
}

/// Minimises the overlap on the unit sphere by projected gradient descent
/// with backtracking; returns the smallest overlap over all restarts.
fn minimise_overlap(lambda: &[f64], cfg: &OracleConfig, rng: &mut ChaCha8Rng) -> f64 {
    let dim = lambda.len();
    let mut best = f64::INFINITY;
    let mut grad = vec![Complex64::new(0.0, 0.0); dim];
    let mut trial = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..cfg.restarts {
        let mut psi = random_state(dim, rng);
        let (mut g, mut a, mut b) = overlap(lambda, &psi);
        let mut step = 1.0;
        for _ in 0..cfg.max_iters {
            if b <= 0.0 {
                break;
            }
            for i in 0..dim {
                let h = 2.0 * (2.0 * a * lambda[i] * b - a * a * lambda[i] * lambda[i]) / (b * b);
                grad[i] = psi[i] * h;
            }
            let radial: f64 = psi.iter().zip(&grad).map(|(p, q)| (p.conj() * q).re).sum();
            for i in 0..dim {
                grad[i] -= psi[i] * radial;
            }
            let gnorm2: f64 = grad.iter().map(|z| z.norm_sqr()).sum();
            if gnorm2.sqrt() < cfg.tol {
                break;
            }
            let mut accepted = false;
            while step > 1e-16 {
                for i in 0..dim {
                    trial[i] = psi[i] - grad[i] * step;
                }
                normalize(&mut trial);
                let (gt, at, bt) = overlap(lambda, &trial);
                if gt <= g - 1e-4 * step * gnorm2 {
                    psi.copy_from_slice(&trial);
                    (g, a, b) = (gt, at, bt);
                    step *= 2.0;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        best = best.min(g);
    }
    best
}

/// Both maximisations of `√(1 − |⟨ψ|Mψ⟩|²/‖Mψ‖²)`: over system states and
/// over system-ancilla states with `M ⊗ I`.
pub fn postselection_oracle(m: &MeasurementDiag, cfg: &OracleConfig) -> Result<OracleOutcome> {
    let dim = m.dim();
    if dim > ORACLE_DIM_CAP {
        return Err(Error::CapExceeded {
            kind: "oracle dimension",
            qubits: dim,
            cap: ORACLE_DIM_CAP,
        });
    }
    if m.max() <= 0.0 {
        return Err(Error::DegenerateOperator);
    }
    // The objective is scale invariant.
    let lambda: Vec<f64> = m.entries().iter().map(|l| l / m.max()).collect();
    let extended: Vec<f64> = lambda
        .iter()
        .flat_map(|&l| std::iter::repeat_n(l, dim))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let plain = minimise_overlap(&lambda, cfg, &mut rng);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let ext = minimise_overlap(&extended, cfg, &mut rng);
    let d = |g: f64| (1.0 - g).max(0.0).sqrt();
    Ok(OracleOutcome {
        plain: d(plain),
        extended: d(ext),
    })
}

/// The larger of the ancilla-free and ancilla-extended maxima.
pub fn brute_force_postselection_distance(m: &MeasurementDiag, cfg: &OracleConfig) -> Result<f64> {
    postselection_oracle(m, cfg).map(|o| o.distance())
}

/// Lower estimate of the diamond distance between two single-qubit channels
/// by random-restart hill climbing over pure probe states.
///
/// Probes live on a one-photon register: the channels must act on the atom
/// and leave the photon, which serves as the ancilla, untouched.
pub fn brute_force_channel_distance<F, G>(first: F, second: G, cfg: &OracleConfig) -> Result<f64>
where
    F: Fn(DensityMatrix) -> Result<DensityMatrix>,
    G: Fn(DensityMatrix) -> Result<DensityMatrix>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let eval = |psi: &[Complex64]| -> Result<f64> {
        let rho = DensityMatrix::from_pure(&StateVector::from_amplitudes(1, psi.to_vec())?)?;
        let a = first(rho.clone())?;
        let b = second(rho)?;
        Ok(trace_distance(&a.to_matrix(), &b.to_matrix()))
    };
    let mut best: f64 = 0.0;
    for _ in 0..cfg.restarts {
        let mut psi = random_state(4, &mut rng);
        let mut value = eval(&psi)?;
        let mut sigma = 0.5;
        let mut failures = 0;
        for _ in 0..cfg.max_iters {
            if sigma < cfg.tol {
                break;
            }
            let noise = random_state(4, &mut rng);
            let mut trial: Vec<Complex64> =
                psi.iter().zip(&noise).map(|(p, z)| p + z * sigma).collect();
            normalize(&mut trial);
            let v = eval(&trial)?;
            if v > value {
                psi = trial;
                value = v;
                failures = 0;
            } else {
                failures += 1;
                if failures >= 20 {
                    sigma *= 0.5;
                    failures = 0;
                }
            }
        }
        best = best.max(value);
    }
    Ok(best)
}
