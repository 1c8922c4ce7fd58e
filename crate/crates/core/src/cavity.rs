//! Spin-dependent reflection off a single-sided atom-cavity system.
//!
//! All rates and detunings are ordinary frequencies in GHz. A vertically
//! polarised photon reflecting off the cavity picks up the coefficient
//! `r(Δ) = (C_s − 1)/(C_s + 1)` with `C_s = C/(1 + 2iΔ/κ)`, where `Δ` is the
//! detuning of the spin-conditioned transition. Horizontal photons bypass the
//! cavity. The relative phase between the two spin branches is the
//! controlled phase `Δθ = θ_↓ − θ_↑`.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::{sci, CsvTable};
use crate::params;

/// Bisection stops once the phase residual is this small (radians).
pub const PHASE_TOLERANCE: f64 = 1e-9;
const MAX_BISECTION_ITERS: usize = 200;
/// Points sampled inside a bracket to confirm the phase is monotone there.
const MONOTONE_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// Atom-cavity coupling strength `g`, GHz.
    pub g: f64,
    /// Atom dipole decay rate `κ`, GHz.
    pub kappa: f64,
    /// Cavity decay rate `γ`, GHz.
    pub gamma: f64,
}

impl CavityParams {
    pub fn new(g: f64, kappa: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("g", g), ("kappa", kappa), ("gamma", gamma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(Self { g, kappa, gamma })
    }

    /// The charged quantum-dot device used throughout the presets.
    pub fn quantum_dot() -> Self {
        Self {
            g: params::QD_G_GHZ,
            kappa: params::QD_KAPPA_GHZ,
            gamma: params::QD_GAMMA_GHZ,
        }
    }

    /// Parameters with the requested cooperativity, holding `κ` and `γ` fixed
    /// and solving for `g`.
    pub fn with_cooperativity(cooperativity: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if !(cooperativity.is_finite() && cooperativity > 0.0) {
            return Err(Error::InvalidParams(format!(
                "cooperativity must be finite and positive, got {cooperativity}"
            )));
        }
        Self::new((cooperativity * gamma * kappa / 4.0).sqrt(), kappa, gamma)
    }

    pub fn cooperativity(&self) -> f64 {
        cooperativity(self)
    }
}

/// On-resonance cooperativity `C = 4g²/(γκ)`.
pub fn cooperativity(params: &CavityParams) -> f64 {
    4.0 * params.g * params.g / (params.gamma * params.kappa)
}

/// Detuning configuration for one reflection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Offset detuning `Δ₀`, GHz.
    pub delta_0: f64,
    /// Zeeman splitting `Δ_Z`, GHz (signed).
    pub delta_z: f64,
    /// Stark shift `Δ_S`, GHz.
    pub delta_s: f64,
}

impl OperatingPoint {
    pub fn new(delta_0: f64, delta_z: f64, delta_s: f64) -> Result<Self> {
        if !(delta_0.is_finite() && delta_z.is_finite() && delta_s.is_finite()) {
            return Err(Error::InvalidParams(
                "operating-point detunings must be finite".into(),
            ));
        }
        Ok(Self {
            delta_0,
            delta_z,
            delta_s,
        })
    }

    pub fn with_stark_shift(self, delta_s: f64) -> Self {
        Self { delta_s, ..self }
    }

    /// `Δ_↑ = Δ_S + Δ₀`
    pub fn delta_up(&self) -> f64 {
        self.delta_s + self.delta_0
    }

    /// `Δ_↓ = Δ_S + Δ_Z + Δ₀`
    pub fn delta_down(&self) -> f64 {
        self.delta_s + self.delta_z + self.delta_0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeemanConfig {
    pub g_electron: f64,
    pub g_hole: f64,
    /// Magnetic field, Tesla.
    pub field: f64,
}

impl ZeemanConfig {
    pub fn new(g_electron: f64, g_hole: f64, field: f64) -> Result<Self> {
        if !(g_electron.is_finite() && g_hole.is_finite()) {
            return Err(Error::InvalidParams("Lande factors must be finite".into()));
        }
        if !(field.is_finite() && field >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "magnetic field must be finite and non-negative, got {field}"
            )));
        }
        Ok(Self {
            g_electron,
            g_hole,
            field,
        })
    }

    pub fn quantum_dot() -> Self {
        Self {
            g_electron: params::QD_G_ELECTRON,
            g_hole: params::QD_G_HOLE,
            field: params::QD_FIELD_TESLA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionResult {
    pub r_up: Complex64,
    pub r_down: Complex64,
    /// `arg r_↑` in `(−π, π]`.
    pub theta_up: f64,
    /// `arg r_↓` in `(−π, π]`.
    pub theta_down: f64,
    /// `θ_↓ − θ_↑` reduced into `[0, 2π)`.
    pub delta_theta: f64,
}

impl ReflectionResult {
    pub fn r_up_abs(&self) -> f64 {
        self.r_up.norm()
    }

    pub fn r_down_abs(&self) -> f64 {
        self.r_down.norm()
    }
}

/// Exact finite-cooperativity reflection coefficient at detuning `delta`.
pub fn reflection(params: &CavityParams, delta: f64) -> Complex64 {
    let c = cooperativity(params);
    let c_spin = Complex64::new(c, 0.0) / Complex64::new(1.0, 2.0 * delta / params.kappa);
    (c_spin - 1.0) / (c_spin + 1.0)
}

/// Reflection at both spin detunings of `op`.
pub fn controlled_phase(params: &CavityParams, op: &OperatingPoint) -> ReflectionResult {
    let r_up = reflection(params, op.delta_up());
    let r_down = reflection(params, op.delta_down());
    let theta_up = r_up.arg();
    let theta_down = r_down.arg();
    ReflectionResult {
        r_up,
        r_down,
        theta_up,
        theta_down,
        delta_theta: (theta_down - theta_up).rem_euclid(TAU),
    }
}

/// Phase-only reflection valid for `C ≫ 1`:
/// `Im ln[(1 − 2iΔ/κC)/(1 + 2iΔ/κC)]`.
///
/// This agrees with `arg reflection(params, delta)` modulo `2π` with no
/// constant offset; both tend to `0` at resonance and to `±π` far detuned.
pub fn high_c_phase(params: &CavityParams, delta: f64) -> f64 {
    let x = 2.0 * delta / (params.kappa * cooperativity(params));
    (Complex64::new(1.0, -x) / Complex64::new(1.0, x)).ln().im
}

/// Zeeman splitting `(g_e + g_h)·μ_B·B/h` in GHz.
pub fn zeeman_splitting(cfg: &ZeemanConfig) -> f64 {
    (cfg.g_electron + cfg.g_hole) * params::MU_B_OVER_H_GHZ_PER_T * cfg.field
}

/// `Δ₀ = (κ/2)√(C² − 1)` and `Δ_Z = −2Δ₀`, with no Stark shift. At this
/// point `Δ_↑ = −Δ_↓ = Δ₀` and the controlled phase is exactly `π`.
pub fn default_operating_point(params: &CavityParams) -> Result<OperatingPoint> {
    let c = cooperativity(params);
    if !(c > 1.0) {
        return Err(Error::DegenerateCooperativity(c));
    }
    let delta_0 = 0.5 * params.kappa * (c * c - 1.0).sqrt();
    Ok(OperatingPoint {
        delta_0,
        delta_z: -2.0 * delta_0,
        delta_s: 0.0,
    })
}

/// Target phase `2π/2^k` of `CR_k`.
pub fn cr_phase(k: u32) -> f64 {
    TAU / 2f64.powi(k as i32)
}

/// Large-`k` estimate `κC√(2^k/2π)` of the Stark shift realising `CR_k`.
pub fn stark_shift_estimate(params: &CavityParams, k: u32) -> f64 {
    params.kappa * cooperativity(params) * (2f64.powi(k as i32) / TAU).sqrt()
}

/// Finds the Stark shift in `[0, delta_s_max]` at which the controlled phase
/// equals `2π/2^k`.
///
/// The phase falls monotonically from `π` as the Stark shift grows, so a
/// geometric sweep locates the first sign change and bisection refines it.
pub fn solve_stark_shift(
    params: &CavityParams,
    delta_0: f64,
    delta_z: f64,
    k: u32,
    delta_s_max: f64,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParams("CR_k requires k >= 1".into()));
    }
    if !(delta_s_max.is_finite() && delta_s_max > 0.0) {
        return Err(Error::InvalidParams(format!(
            "delta_S_max must be finite and positive, got {delta_s_max}"
        )));
    }
    let base = OperatingPoint::new(delta_0, delta_z, 0.0)?;
    let target = cr_phase(k);
    let residual = |delta_s: f64| {
        controlled_phase(params, &base.with_stark_shift(delta_s)).delta_theta - target
    };

    let f0 = residual(0.0);
    if f0.abs() <= PHASE_TOLERANCE {
        return Ok(0.0);
    }
    if f0 < 0.0 {
        return Err(Error::OutOfRange {
            k,
            max_ghz: delta_s_max,
        });
    }

    // Geometric sweep from 1e-9 of the range up to delta_s_max.
    let mut lo = 0.0;
    let mut hi = None;
    let mut x = delta_s_max * 1e-9;
    loop {
        let x_clamped = x.min(delta_s_max);
        if residual(x_clamped) <= 0.0 {
            hi = Some(x_clamped);
            break;
        }
        lo = x_clamped;
        if x_clamped >= delta_s_max {
            break;
        }
        x *= 1.25;
    }
    let Some(mut hi) = hi else {
        return Err(Error::OutOfRange {
            k,
            max_ghz: delta_s_max,
        });
    };

    let mut prev = f64::INFINITY;
    for i in 0..=MONOTONE_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / MONOTONE_SAMPLES as f64;
        let f = residual(x);
        if f > prev + PHASE_TOLERANCE {
            return Err(Error::InvalidParams(format!(
                "controlled phase is not monotone on [{lo}, {hi}] GHz"
            )));
        }
        prev = f;
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTION_ITERS {
        mid = 0.5 * (lo + hi);
        let f = residual(mid);
        if f == 0.0 || hi - lo <= f64::EPSILON * hi {
            break;
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if residual(mid).abs() > PHASE_TOLERANCE {
        return Err(Error::OutOfRange {
            k,
            max_ghz: delta_s_max,
        });
    }
    Ok(mid)
}

/// A solved `CR_k` operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarkMark {
    pub k: u32,
    pub op: OperatingPoint,
    pub reflection: ReflectionResult,
}

/// Solves the Stark shift for every `k` in `1..=k_max` around the default
/// operating point.
pub fn solve_marks(params: &CavityParams, k_max: u32, delta_s_max: f64) -> Result<Vec<StarkMark>> {
    let base = default_operating_point(params)?;
    (1..=k_max)
        .map(|k| {
            let delta_s = solve_stark_shift(params, base.delta_0, base.delta_z, k, delta_s_max)?;
            let op = base.with_stark_shift(delta_s);
            Ok(StarkMark {
                k,
                op,
                reflection: controlled_phase(params, &op),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCurvePoint {
    pub delta_s: f64,
    pub delta_theta: f64,
    pub r_up_abs: f64,
    pub r_down_abs: f64,
}

/// Samples `Δθ(Δ_S)` at `points` evenly spaced Stark shifts in
/// `[start, stop]`. `points == 0` yields an empty curve.
pub fn phase_curve(
    params: &CavityParams,
    base: &OperatingPoint,
    start: f64,
    stop: f64,
    points: usize,
) -> Vec<PhaseCurvePoint> {
    (0..points)
        .map(|i| {
            let delta_s = if points == 1 {
                start
            } else {
                start + (stop - start) * i as f64 / (points - 1) as f64
            };
            let r = controlled_phase(params, &base.with_stark_shift(delta_s));
            PhaseCurvePoint {
                delta_s,
                delta_theta: r.delta_theta,
                r_up_abs: r.r_up_abs(),
                r_down_abs: r.r_down_abs(),
            }
        })
        .collect()
}

pub const PHASE_CURVE_HEADER: [&str; 4] =
    ["delta_S_GHz", "delta_theta_rad", "r_up_abs", "r_down_abs"];
pub const MARKS_HEADER: [&str; 7] = [
    "k",
    "delta_S_GHz",
    "delta_theta_rad",
    "target_rad",
    "r_up_abs",
    "r_down_abs",
    "estimate_GHz",
];

pub fn phase_curve_table(curve: &[PhaseCurvePoint]) -> CsvTable {
    let mut table = CsvTable::new(&PHASE_CURVE_HEADER);
    for p in curve {
        table.push(vec![
            sci(p.delta_s),
            sci(p.delta_theta),
            sci(p.r_up_abs),
            sci(p.r_down_abs),
        ]);
    }
    table
}

pub fn marks_table(params: &CavityParams, marks: &[StarkMark]) -> CsvTable {
    let mut table = CsvTable::new(&MARKS_HEADER);
    for m in marks {
        table.push(vec![
            m.k.to_string(),
            sci(m.op.delta_s),
            sci(m.reflection.delta_theta),
            sci(cr_phase(m.k)),
            sci(m.reflection.r_up_abs()),
            sci(m.reflection.r_down_abs()),
            sci(stark_shift_estimate(params, m.k)),
        ]);
    }
    table
}

pub fn write_phase_curve_csv<W: Write>(out: W, curve: &[PhaseCurvePoint]) -> Result<()> {
    phase_curve_table(curve).write_csv(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn qd() -> CavityParams {
        CavityParams::quantum_dot()
    }

    #[test]
    fn cooperativity_values() {
        let c = cooperativity(&qd());
        assert!((c - 4.0 * 121.0 / 8.4).abs() < 1e-12);
        assert!((c - 57.619).abs() < 1e-3);
        let p = CavityParams::new(2.0, 2.0, 2.0).unwrap();
        assert_eq!(cooperativity(&p), 4.0);
    }

    #[test]
    fn rejects_non_positive_rates() {
        assert!(CavityParams::new(0.0, 1.0, 1.0).is_err());
        assert!(CavityParams::new(1.0, -1.0, 1.0).is_err());
        assert!(CavityParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn reflection_limits() {
        let p = qd();
        let c = p.cooperativity();
        let r0 = reflection(&p, 0.0);
        assert!((r0.re - (c - 1.0) / (c + 1.0)).abs() < 1e-15);
        assert_eq!(r0.im, 0.0);
        for far in [1e9, -1e9] {
            let r = reflection(&p, far);
            assert!((r - Complex64::new(-1.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn reflection_at_offset_is_minus_i_tan() {
        let p = qd();
        let c = p.cooperativity();
        let op = default_operating_point(&p).unwrap();
        let r = reflection(&p, op.delta_0);
        let phi = (c * c - 1.0).sqrt().atan();
        let expected = Complex64::new(0.0, -(phi / 2.0).tan());
        assert!((r - expected).norm() < 1e-14);
        assert!((r.arg() + PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn default_point_values() {
        let op = default_operating_point(&qd()).unwrap();
        assert!((op.delta_0 - 8.64).abs() < 0.01);
        assert_eq!(op.delta_z, -2.0 * op.delta_0);
        assert_eq!(op.delta_up(), op.delta_0);
        assert_eq!(op.delta_down(), -op.delta_0);

        // C = sqrt(2), kappa = 2 -> delta_0 = 1
        let p = CavityParams::with_cooperativity(2f64.sqrt(), 2.0, 3.0).unwrap();
        let op = default_operating_point(&p).unwrap();
        assert!((op.delta_0 - 1.0).abs() < 1e-12);

        let unit = CavityParams::with_cooperativity(1.0, 1.0, 1.0).unwrap();
        // with_cooperativity goes through sqrt, so C lands within an ulp of 1
        let c = unit.cooperativity();
        if c <= 1.0 {
            assert_eq!(
                default_operating_point(&unit),
                Err(Error::DegenerateCooperativity(c))
            );
        }
        let exact_one = CavityParams::new(1.0, 2.0, 2.0).unwrap();
        assert!(matches!(
            default_operating_point(&exact_one),
            Err(Error::DegenerateCooperativity(_))
        ));
    }

    #[test]
    fn pi_at_zero_stark_shift() {
        let p = qd();
        let op = default_operating_point(&p).unwrap();
        let r = controlled_phase(&p, &op);
        assert!((r.delta_theta - PI).abs() < 1e-12);
    }

    #[test]
    fn phase_vanishes_far_detuned() {
        let p = qd();
        let op = default_operating_point(&p).unwrap().with_stark_shift(1e8);
        let r = controlled_phase(&p, &op);
        let wrapped = r.delta_theta.min(TAU - r.delta_theta);
        assert!(wrapped < 1e-6);
    }

    #[test]
    fn high_c_phase_values() {
        let p = qd();
        assert_eq!(high_c_phase(&p, 0.0), 0.0);
        let half = 0.5 * p.kappa * p.cooperativity();
        assert!((high_c_phase(&p, half) + PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn zeeman_values() {
        assert_eq!(
            zeeman_splitting(&ZeemanConfig::new(0.43, 0.21, 0.0).unwrap()),
            0.0
        );
        assert!(
            (zeeman_splitting(&ZeemanConfig::new(0.5, 0.5, 1.0).unwrap()) - 13.996).abs() < 1e-12
        );
        let dz = zeeman_splitting(&ZeemanConfig::quantum_dot());
        assert!((dz - 17.29).abs() < 0.01);
        assert!(ZeemanConfig::new(0.4, 0.2, -1.0).is_err());
    }

    #[test]
    fn stark_k1_is_zero() {
        let p = qd();
        let op = default_operating_point(&p).unwrap();
        assert_eq!(
            solve_stark_shift(&p, op.delta_0, op.delta_z, 1, 1000.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn stark_rejects_bad_inputs() {
        let p = qd();
        assert!(solve_stark_shift(&p, 8.0, -16.0, 0, 1000.0).is_err());
        assert!(solve_stark_shift(&p, 8.0, -16.0, 2, 0.0).is_err());
    }

    #[test]
    fn stark_out_of_range_for_k15() {
        let p = qd();
        let op = default_operating_point(&p).unwrap();
        let err = solve_stark_shift(&p, op.delta_0, op.delta_z, 15, 1000.0).unwrap_err();
        assert_eq!(
            err,
            Error::OutOfRange {
                k: 15,
                max_ghz: 1000.0
            }
        );
    }

    #[test]
    fn empty_curve() {
        let p = qd();
        let op = default_operating_point(&p).unwrap();
        assert!(phase_curve(&p, &op, 0.0, 100.0, 0).is_empty());
        let mut buf = Vec::new();
        write_phase_curve_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "delta_S_GHz,delta_theta_rad,r_up_abs,r_down_abs\n"
        );
    }
}
