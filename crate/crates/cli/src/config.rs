//! Subcommand arguments. Each command also accepts `--config FILE`, a JSON
//! object with the keys listed on its file struct; flags take precedence.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::{Failure, OutputArgs};

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// A number or the string `"inf"`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum MaybeInfinite {
    Number(f64),
    Tag(InfTag),
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

impl MaybeInfinite {
    pub fn value(self) -> f64 {
        match self {
            MaybeInfinite::Number(x) => x,
            MaybeInfinite::Tag(InfTag::Inf) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PhaseCurveArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coupling strength g, GHz [default: 11]
    #[arg(long)]
    pub g: Option<f64>,
    /// Decay rate kappa, GHz [default: 0.3]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Decay rate gamma, GHz [default: 28]
    #[arg(long)]
    pub gamma: Option<f64>,
    /// First Stark shift, GHz [default: 0]
    #[arg(long)]
    pub start: Option<f64>,
    /// Last Stark shift, GHz [default: 1500]
    #[arg(long)]
    pub stop: Option<f64>,
    /// Number of samples; 0 writes only the header [default: 301]
    #[arg(long)]
    pub points: Option<usize>,
    /// Solve CR_k marks for k = 1..=K_MAX; 0 skips them [default: 10]
    #[arg(long)]
    pub k_max: Option<u32>,
    /// Largest available Stark shift, GHz [default: 1000]
    #[arg(long)]
    pub delta_s_max: Option<f64>,
    /// Where to write the marks table; next to --out when omitted.
    #[arg(long)]
    pub marks_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseCurveFile {
    pub g: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(rename = "start_GHz")]
    pub start: Option<f64>,
    #[serde(rename = "stop_GHz")]
    pub stop: Option<f64>,
    pub points: Option<usize>,
    #[serde(rename = "K_max")]
    pub k_max: Option<u32>,
    #[serde(rename = "delta_S_max_GHz")]
    pub delta_s_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", required = true, multiple = false, args = ["preset", "config"])]
pub struct SuccessArgs {
    /// Built-in scenario set: fig4, fig5a or fig5b.
    #[arg(long)]
    pub preset: Option<String>,
    /// Scenario JSON: one object, an array, or {"scenarios": [...]}.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override N_max of every scenario.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of photons n.
    #[arg(long)]
    pub photons: Option<usize>,
    /// Largest implemented CR_k [default: n]
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Input bitstring x1 x2 ... xn [default: all zeros]
    #[arg(long, conflicts_with = "state_file")]
    pub input: Option<String>,
    /// JSON array of 2^n [re, im] photon amplitudes.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    /// Atomic Hadamard error probability [default: 0]
    #[arg(long)]
    pub p: Option<f64>,
    /// Dephasing time, µs [default: infinite]
    #[arg(long)]
    pub t2_us: Option<f64>,
    /// Lossy reflections at this cooperativity [default: lossless]
    #[arg(long)]
    pub cooperativity: Option<f64>,
    /// Largest available Stark shift, GHz [default: 1000]
    #[arg(long)]
    pub delta_s_max: Option<f64>,
    /// Operation cycle, ns [default: 5]
    #[arg(long)]
    pub t_cycle: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateFile {
    pub photons: Option<usize>,
    #[serde(rename = "K")]
    pub cutoff: Option<u32>,
    pub input: Option<String>,
    pub state_file: Option<PathBuf>,
    pub p: Option<f64>,
    #[serde(rename = "T2_us")]
    pub t2_us: Option<MaybeInfinite>,
    pub cooperativity: Option<f64>,
    #[serde(rename = "delta_S_max_GHz")]
    pub delta_s_max: Option<f64>,
    #[serde(rename = "T_cycle_ns")]
    pub t_cycle: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TimelineArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of photons n.
    #[arg(long)]
    pub photons: Option<usize>,
    /// Largest implemented CR_k [default: n]
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Operation cycle, ns [default: 5]
    #[arg(long)]
    pub t_cycle: Option<f64>,
    /// Long delay, ns [default: (n + 1) * T_cycle]
    #[arg(long)]
    pub tau1: Option<f64>,
    /// Short delay, ns [default: T_cycle / 20]
    #[arg(long)]
    pub tau2: Option<f64>,
    /// Compare the scheduled gates with the gate-level program.
    #[arg(long)]
    pub check_equivalence: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimelineFile {
    pub photons: Option<usize>,
    #[serde(rename = "K")]
    pub cutoff: Option<u32>,
    #[serde(rename = "T_cycle_ns")]
    pub t_cycle: Option<f64>,
    pub tau1_ns: Option<f64>,
    pub tau2_ns: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Smaller suite sizes.
    #[arg(long)]
    pub quick: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}
