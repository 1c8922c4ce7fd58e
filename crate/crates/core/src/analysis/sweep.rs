//! Success-probability sweeps over photon number, and the figure presets.

use serde::Deserialize;
use serde_json::Value;

use super::budget::{BudgetModel, DistanceReport, GateQuality, NoiseBudget};
use crate::cavity::CavityParams;
use crate::error::{Error, Result};
use crate::export::{sci, CsvTable};
use crate::params::*;

pub const SWEEP_HEADER: [&str; 10] = [
    "scenario_id",
    "N",
    "d_p",
    "d_H",
    "d1",
    "sum_dk",
    "sum_dk_star",
    "D",
    "P_s_raw",
    "P_s",
];

/// One curve: a budget evaluated for `N = 1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub budget: NoiseBudget,
    pub n_max: usize,
    pub seed: u64,
}

impl Scenario {
    pub fn reports(&self) -> Result<Vec<DistanceReport>> {
        let model = BudgetModel::new(self.budget, self.n_max)?;
        (1..=self.n_max).map(|n| model.report(n)).collect()
    }
}

pub fn sweep_success(scenarios: &[Scenario]) -> Result<CsvTable> {
    let mut table = CsvTable::new(&SWEEP_HEADER);
    for s in scenarios {
        for r in s.reports()? {
            table.push(vec![
                s.id.clone(),
                r.n.to_string(),
                sci(r.d_p),
                sci(r.d_h),
                sci(r.d1),
                sci(r.sum_dk),
                sci(r.sum_dk_star),
                sci(r.total),
                sci(r.success_raw),
                sci(r.success),
            ]);
        }
    }
    Ok(table)
}

fn cavity_gates(cooperativity: f64, delta_s_max_ghz: f64) -> Result<GateQuality> {
    Ok(GateQuality::Cavity {
        params: CavityParams::with_cooperativity(cooperativity, QD_KAPPA_GHZ, QD_GAMMA_GHZ)?,
        delta_s_max_ghz,
    })
}

/// Cooperativity sweep at `K = 10`, `T₂ = 20 µs`, `p = 0.001`, plus the
/// ideal-gate reference curve.
pub fn fig4() -> Result<Vec<Scenario>> {
    let mut out = vec![Scenario {
        id: "fig4_ideal".into(),
        budget: NoiseBudget::new(
            FIG4_T2_US,
            FIG4_P,
            T_CYCLE_NS,
            FIG4_CUTOFF,
            GateQuality::Ideal,
        )?,
        n_max: FIGURE_N_MAX,
        seed: DEFAULT_SEED,
    }];
    for c in FIG4_COOPERATIVITIES {
        out.push(Scenario {
            id: format!("fig4_C{c:.2}"),
            budget: NoiseBudget::new(
                FIG4_T2_US,
                FIG4_P,
                T_CYCLE_NS,
                FIG4_CUTOFF,
                cavity_gates(c, FIG4_STARK_MAX_GHZ)?,
            )?,
            n_max: FIGURE_N_MAX,
            seed: DEFAULT_SEED,
        });
    }
    Ok(out)
}

fn t2_label(t2_us: f64) -> String {
    if t2_us.is_infinite() {
        "inf".into()
    } else {
        format!("{t2_us}us")
    }
}

/// Dephasing-time sweep at `p = 0.01` with ideal gates.
pub fn fig5a() -> Result<Vec<Scenario>> {
    FIG5A_T2_US
        .iter()
        .map(|&t2| {
            Ok(Scenario {
                id: format!("fig5a_T2_{}", t2_label(t2)),
                budget: NoiseBudget::new(
                    t2,
                    FIG5A_P,
                    T_CYCLE_NS,
                    FIGURE_N_MAX as u32,
                    GateQuality::Ideal,
                )?,
                n_max: FIGURE_N_MAX,
                seed: DEFAULT_SEED,
            })
        })
        .collect()
}

/// Hadamard-error sweep at `T₂ = 20 µs` with ideal gates.
pub fn fig5b() -> Result<Vec<Scenario>> {
    FIG5B_P
        .iter()
        .map(|&p| {
            Ok(Scenario {
                id: format!("fig5b_p{p}"),
                budget: NoiseBudget::new(
                    FIG5B_T2_US,
                    p,
                    T_CYCLE_NS,
                    FIGURE_N_MAX as u32,
                    GateQuality::Ideal,
                )?,
                n_max: FIGURE_N_MAX,
                seed: DEFAULT_SEED,
            })
        })
        .collect()
}

pub const PRESET_NAMES: [&str; 3] = ["fig4", "fig5a", "fig5b"];

pub fn preset(name: &str) -> Result<Vec<Scenario>> {
    match name {
        "fig4" => fig4(),
        "fig5a" => fig5a(),
        "fig5b" => fig5b(),
        other => Err(Error::Config(format!(
            "unknown preset '{other}', expected one of {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum NumberOrTag {
    Number(f64),
    Tag(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioEntry {
    id: Option<String>,
    #[serde(rename = "T2_us", default)]
    t2_us: Option<NumberOrTag>,
    p: f64,
    #[serde(rename = "T_cycle_ns", default = "default_t_cycle")]
    t_cycle_ns: f64,
    #[serde(rename = "K")]
    cutoff: u32,
    cooperativity: NumberOrTag,
    #[serde(rename = "N_max")]
    n_max: usize,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(rename = "delta_S_max_GHz", default = "default_stark_max")]
    delta_s_max_ghz: f64,
}

fn default_t_cycle() -> f64 {
    T_CYCLE_NS
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_stark_max() -> f64 {
    STARK_MAX_GHZ
}

impl ScenarioEntry {
    fn into_scenario(self, index: usize) -> Result<Scenario> {
        let t2_us = match self.t2_us {
            None => f64::INFINITY,
            Some(NumberOrTag::Number(x)) => x,
            Some(NumberOrTag::Tag(t)) if t.eq_ignore_ascii_case("inf") => f64::INFINITY,
            Some(NumberOrTag::Tag(t)) => {
                return Err(Error::Config(format!(
                    "T2_us: expected a number or \"inf\", got \"{t}\""
                )))
            }
        };
        let gates = match self.cooperativity {
            NumberOrTag::Number(c) => cavity_gates(c, self.delta_s_max_ghz)?,
            NumberOrTag::Tag(t) if t == "ideal" => GateQuality::Ideal,
            NumberOrTag::Tag(t) => {
                return Err(Error::Config(format!(
                    "cooperativity: expected a number or \"ideal\", got \"{t}\""
                )))
            }
        };
        if self.n_max == 0 {
            return Err(Error::Config("N_max must be at least 1".into()));
        }
        Ok(Scenario {
            id: self.id.unwrap_or_else(|| format!("scenario{index}")),
            budget: NoiseBudget::new(t2_us, self.p, self.t_cycle_ns, self.cutoff, gates)?,
            n_max: self.n_max,
            seed: self.seed,
        })
    }
}

/// Parses one scenario object, an array of them, or `{"scenarios": [...]}`.
pub fn parse_scenarios(json: &str) -> Result<Vec<Scenario>> {
    let value: Value = serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))?;
    let items = match value {
        Value::Array(items) => items,
        Value::Object(mut obj) if obj.contains_key("scenarios") => match obj.remove("scenarios") {
            Some(Value::Array(items)) => items,
            _ => return Err(Error::Config("\"scenarios\" must be an array".into())),
        },
        obj @ Value::Object(_) => vec![obj],
        _ => {
            return Err(Error::Config(
                "expected a scenario object or an array of them".into(),
            ))
        }
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, item)| {
            let entry: ScenarioEntry = serde_json::from_value(item)
                .map_err(|e| Error::Config(format!("scenario {i}: {e}")))?;
            entry.into_scenario(i)
        })
        .collect()
}
