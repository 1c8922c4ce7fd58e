//! Reference parameter table.
//!
//! Every preset in the crate and the CLI is assembled from these constants so
//! that a single self-test can pin them.

/// Atom-cavity coupling strength of the charged quantum-dot device, GHz.
pub const QD_G_GHZ: f64 = 11.0;
/// Atom dipole decay rate, GHz.
pub const QD_KAPPA_GHZ: f64 = 0.3;
/// Cavity decay rate, GHz.
pub const QD_GAMMA_GHZ: f64 = 28.0;

/// Electron Lande factor.
pub const QD_G_ELECTRON: f64 = 0.43;
/// Hole Lande factor.
pub const QD_G_HOLE: f64 = 0.21;
/// Applied magnetic field, Tesla.
pub const QD_FIELD_TESLA: f64 = 1.93;

/// Quoted offset detuning, GHz (three significant figures).
pub const QD_DELTA_0_GHZ: f64 = 8.64;

/// Bohr magneton over Planck's constant, GHz per Tesla.
pub const MU_B_OVER_H_GHZ_PER_T: f64 = 13.996;

/// Largest available Stark shift for quantum dots, GHz.
pub const STARK_MAX_GHZ: f64 = 1000.0;
/// Largest `k` reachable with [`STARK_MAX_GHZ`].
pub const STARK_MAX_K: u32 = 14;

/// Operation cycle, ns.
pub const T_CYCLE_NS: f64 = 5.0;

/// Success-vs-cooperativity sweep: cutoff, dephasing time (µs), Hadamard error.
pub const FIG4_CUTOFF: u32 = 10;
pub const FIG4_T2_US: f64 = 20.0;
pub const FIG4_P: f64 = 0.001;
/// Cooperativities swept; the first entry is the quantum-dot device itself.
pub const FIG4_COOPERATIVITIES: [f64; 5] = [57.619_047_619_047_62, 100.0, 200.0, 400.0, 1000.0];
/// Stark-shift ceiling for the cooperativity sweep. The sweep is a budget
/// evaluation, not a device model, so tuning is left effectively unbounded.
pub const FIG4_STARK_MAX_GHZ: f64 = 1.0e6;

/// Dephasing sweep: Hadamard error and T2 values (µs, `INFINITY` allowed).
pub const FIG5A_P: f64 = 0.01;
pub const FIG5A_T2_US: [f64; 4] = [5.0, 20.0, 100.0, f64::INFINITY];

/// Hadamard-error sweep: dephasing time (µs) and error rates.
pub const FIG5B_T2_US: f64 = 20.0;
pub const FIG5B_P: [f64; 3] = [0.05, 0.01, 0.001];

/// Largest photon number shown in the success-probability figures.
pub const FIGURE_N_MAX: usize = 50;

/// Seed used whenever the caller does not pass one.
pub const DEFAULT_SEED: u64 = 0x0005_eed0_f9f7;
