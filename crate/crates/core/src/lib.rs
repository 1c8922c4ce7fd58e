//! Simulation and verification toolkit for a photonic quantum Fourier
//! transform mediated by a single atom coupled to a single-sided cavity.
//!
//! The crate is organised bottom-up:
//!
//! - [`cavity`]: spin-dependent reflection coefficients and the Stark-shift
//!   operating points that realise each `CR_k` gate.
//! - [`circuit`]: gate-level programs for the streaming QFT, pure-state and
//!   density-matrix simulation, and the noise channels used for bound checks.
//! - [`scheduler`]: discrete-event timeline of the two-delay-loop hardware and
//!   its compilation back into a gate program.
//! - [`analysis`]: diamond-distance terms, the total error budget, success
//!   probability sweeps, and a brute-force oracle for the post-selection
//!   distance.
//! - [`params`]: the reference parameter table every preset is built from.
//! - [`validation`]: self-check suites shared by the CLI and the acceptance
//!   tests.

// Negated comparisons deliberately reject NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cavity;
pub mod circuit;
pub mod error;
pub mod export;
pub mod linalg;
pub mod params;
pub mod scheduler;
pub mod validation;

pub use num_complex::Complex64;

pub use analysis::{
    BudgetModel, DistanceReport, GateQuality, MeasurementDiag, NoiseBudget, PhotonLimit,
};
pub use cavity::{CavityParams, OperatingPoint, ReflectionResult, ZeemanConfig};
pub use circuit::{CircuitProgram, DensityMatrix, GateOp, QuantumState, QubitRef, StateVector};
pub use error::{Error, Result};
pub use scheduler::{Timeline, TimelineEvent, TimingConfig};
