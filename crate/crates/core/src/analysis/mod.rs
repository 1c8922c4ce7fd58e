//! Diamond-distance error budget and its numerical checks.
//!
//! The budget bounds the total error of the streamed transform by chaining
//! per-operation distances: memory dephasing per idle cycle, atomic Hadamard
//! errors, lossy post-selected reflections and truncated small-angle gates.

mod bound;
mod budget;
mod oracle;
mod sweep;
mod terms;

pub use bound::{noise_model, validate_bound_small_n, BoundReport, RANDOM_INPUTS};
pub use budget::{
    max_photons, total_distance, BudgetModel, DistanceReport, GateEntry, GateQuality, NoiseBudget,
    PhotonLimit, PHOTON_SCAN_CAP,
};
pub use oracle::{
    brute_force_channel_distance, brute_force_postselection_distance, postselection_oracle,
    OracleConfig, OracleOutcome, ORACLE_DIM_CAP,
};
pub use sweep::{
    fig4, fig5a, fig5b, parse_scenarios, preset, sweep_success, Scenario, PRESET_NAMES,
    SWEEP_HEADER,
};
pub use terms::{
    postselection_distance, term_dk, term_dk_approx, term_dk_star, term_dp, MeasurementDiag,
};
