//! Self-check suites: the gate identity, circuit equivalences, the
//! post-selection oracle and the budget bound.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    postselection_distance, postselection_oracle, term_dk, validate_bound_small_n, GateQuality,
    MeasurementDiag, NoiseBudget, OracleConfig,
};
use crate::cavity::CavityParams;
use crate::circuit::{
    build_qft_program, embed_qft_output, ideal_qft_unitary, program_unitary, simulate_program,
    swap_from_cr1, CircuitProgram, QuantumState, StateVector,
};
use crate::error::Result;
use crate::linalg::operator_norm;
use crate::params::{STARK_MAX_GHZ, T_CYCLE_NS};
use crate::scheduler::{compile_timeline, timeline_to_program, TimingConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteOutcome {
    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self {
                name,
                passed,
                detail,
            },
            Err(e) => Self {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

/// Operator-norm distance between the six-gate sequence and SWAP on one
/// atom and one photon.
pub fn swap_identity_error() -> Result<f64> {
    let u = program_unitary(&CircuitProgram::new(1, 1, swap_from_cr1(1))?)?;
    let one = Complex64::new(1.0, 0.0);
    let mut swap = DMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        swap[(i, j)] = one;
    }
    Ok(operator_norm(&(u - swap)))
}

/// Largest amplitude error of the untruncated program against the ideal
/// transform over all `2^n` basis inputs, after output relabeling.
pub fn qft_equivalence_error(n: usize) -> Result<f64> {
    let program = build_qft_program(n, n as u32)?;
    let ideal = ideal_qft_unitary(n)?;
    let mut worst: f64 = 0.0;
    for x in 0..1usize << n {
        let out = simulate_program(
            &program,
            QuantumState::Pure(StateVector::from_photon_bits(n, x)?),
        )?;
        let QuantumState::Pure(out) = out else {
            unreachable!("pure input stays pure")
        };
        let column: Vec<Complex64> = ideal.column(x).iter().copied().collect();
        let expected = embed_qft_output(n, &column)?;
        for (a, b) in out.amplitudes().iter().zip(expected.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

/// Whether the compiled timeline yields exactly the gate sequence.
pub fn scheduler_matches(n: usize, cutoff: u32) -> Result<bool> {
    let timeline = compile_timeline(&TimingConfig::with_defaults(n, T_CYCLE_NS)?, cutoff)?;
    Ok(timeline_to_program(&timeline)? == build_qft_program(n, cutoff)?)
}

pub fn swap_identity_suite() -> SuiteOutcome {
    SuiteOutcome::from_result(
        "swap-identity",
        swap_identity_error().map(|e| (e < 1e-12, format!("operator-norm error {e:.3e}"))),
    )
}

pub fn qft_equivalence_suite(n_max: usize) -> SuiteOutcome {
    let run = || -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for n in 1..=n_max {
            worst = worst.max(qft_equivalence_error(n)?);
        }
        Ok((
            worst < 1e-10,
            format!("n <= {n_max}, max amplitude error {worst:.3e}"),
        ))
    };
    SuiteOutcome::from_result("qft-equivalence", run())
}

pub fn scheduler_equivalence_suite(n_max: usize) -> SuiteOutcome {
    let run = || -> Result<(bool, String)> {
        let mut mismatches = Vec::new();
        for n in 1..=n_max {
            for k in 1..=n as u32 {
                if !scheduler_matches(n, k)? {
                    mismatches.push(format!("n={n},K={k}"));
                }
            }
        }
        Ok(if mismatches.is_empty() {
            (true, format!("n <= {n_max}, all cutoffs"))
        } else {
            (false, format!("mismatch at {}", mismatches.join(" ")))
        })
    };
    SuiteOutcome::from_result("scheduler-equivalence", run())
}

/// Largest disagreements found by [`oracle_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleDeviation {
    /// Closed form against the oracle on random diagonals.
    pub closed_form: f64,
    /// Ancilla-extended against ancilla-free oracle maxima.
    pub ancilla: f64,
    /// Reflection distance `dk` against the oracle on `diag(1, 1, |r_↑|, |r_↓|)`.
    pub reflection: f64,
}

/// Compares the closed forms with the oracle on `samples` random diagonals
/// per dimension 2, 3, 4 and on `samples` random reflection pairs.
///
/// `dk` is the reflection distance under test, normally [`term_dk`].
pub fn oracle_check(
    dk: &dyn Fn(Complex64, Complex64) -> f64,
    samples: usize,
    cfg: &OracleConfig,
) -> Result<OracleDeviation> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dev = OracleDeviation {
        closed_form: 0.0,
        ancilla: 0.0,
        reflection: 0.0,
    };
    for dim in 2..=4 {
        for _ in 0..samples {
            let m = MeasurementDiag::new((0..dim).map(|_| 1.0 - rng.random::<f64>()).collect())?;
            let run = OracleConfig {
                seed: rng.random(),
                ..*cfg
            };
            let o = postselection_oracle(&m, &run)?;
            dev.closed_form = dev
                .closed_form
                .max((postselection_distance(&m)? - o.distance()).abs());
            dev.ancilla = dev.ancilla.max((o.extended - o.plain).abs());
        }
    }
    for _ in 0..samples {
        let r_up = Complex64::from_polar(
            1.0 - rng.random::<f64>(),
            rng.random::<f64>() * std::f64::consts::TAU,
        );
        let r_down = Complex64::from_polar(
            1.0 - rng.random::<f64>(),
            rng.random::<f64>() * std::f64::consts::TAU,
        );
        let run = OracleConfig {
            seed: rng.random(),
            ..*cfg
        };
        let o = postselection_oracle(&MeasurementDiag::reflection(r_up, r_down)?, &run)?;
        dev.reflection = dev.reflection.max((dk(r_up, r_down) - o.distance()).abs());
    }
    Ok(dev)
}

/// Oracle suite against an arbitrary reflection-distance formula.
pub fn oracle_suite_with(
    dk: &dyn Fn(Complex64, Complex64) -> f64,
    samples: usize,
    cfg: &OracleConfig,
) -> SuiteOutcome {
    let run = oracle_check(dk, samples, cfg).map(|d| {
        let passed = d.closed_form < 1e-4 && d.ancilla < 1e-6 && d.reflection < 1e-4;
        (
            passed,
            format!(
                "closed form {:.3e}, ancilla {:.3e}, reflection {:.3e}",
                d.closed_form, d.ancilla, d.reflection
            ),
        )
    });
    SuiteOutcome::from_result("oracle-agreement", run)
}

pub fn oracle_suite(samples: usize, cfg: &OracleConfig) -> SuiteOutcome {
    oracle_suite_with(&term_dk, samples, cfg)
}

/// Budgets used by the bound suite: ideal and quantum-dot reflections at
/// `p = 0.01`, `T₂ = 20 µs`.
pub fn bound_budgets() -> Result<[(&'static str, NoiseBudget); 2]> {
    let cavity = GateQuality::Cavity {
        params: CavityParams::quantum_dot(),
        delta_s_max_ghz: STARK_MAX_GHZ,
    };
    Ok([
        ("ideal", NoiseBudget::ideal(20.0, 0.01, T_CYCLE_NS)?),
        (
            "cavity",
            NoiseBudget::new(20.0, 0.01, T_CYCLE_NS, 3, cavity)?,
        ),
    ])
}

pub fn bound_suite(seed: u64) -> SuiteOutcome {
    let run = || -> Result<(bool, String)> {
        let mut parts = Vec::new();
        for (label, budget) in bound_budgets()? {
            for n in [2, 3] {
                let r = validate_bound_small_n(n, &budget, seed)?;
                parts.push(format!(
                    "{label} n={n}: {:.4e} <= {:.4e}",
                    r.max_trace_distance, r.bound
                ));
            }
        }
        Ok((true, parts.join("; ")))
    };
    SuiteOutcome::from_result("bound-validation", run())
}

/// Every suite at its standard size.
pub fn run_all(seed: u64) -> Vec<SuiteOutcome> {
    let cfg = OracleConfig {
        seed,
        ..OracleConfig::default()
    };
    vec![
        swap_identity_suite(),
        qft_equivalence_suite(8),
        scheduler_equivalence_suite(16),
        oracle_suite(50, &cfg),
        bound_suite(seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> OracleConfig {
        OracleConfig {
            restarts: 10,
            seed: 11,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn swap_identity_holds() {
        assert!(swap_identity_error().unwrap() < 1e-12);
    }

    #[test]
    fn small_suites_pass() {
        assert!(qft_equivalence_suite(4).passed);
        assert!(scheduler_equivalence_suite(6).passed);
        let o = oracle_suite(3, &small());
        assert!(o.passed, "{}", o.detail);
    }

    #[test]
    fn faulty_reflection_formula_fails() {
        let wrong = |a: Complex64, b: Complex64| {
            let m = a.norm().max(b.norm());
            (1.0 - m) / (1.0 + m)
        };
        let o = oracle_suite_with(&wrong, 3, &small());
        assert!(!o.passed, "{}", o.detail);
    }
}
