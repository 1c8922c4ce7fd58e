//! Total diamond-distance budget of the streamed transform.

use serde::Serialize;

use super::terms::{term_dk, term_dk_approx, term_dk_star, term_dp};
use crate::cavity::{controlled_phase, default_operating_point, solve_stark_shift, CavityParams};
use crate::error::{Error, Result};

/// Upper end of the [`max_photons`] scan.
pub const PHOTON_SCAN_CAP: usize = 10_000;

/// How the controlled-phase reflections are modelled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GateQuality {
    /// Lossless reflections and no truncation.
    Ideal,
    /// Lossy reflections at solved operating points, `CR_k` above the cutoff
    /// dropped.
    Cavity {
        params: CavityParams,
        delta_s_max_ghz: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBudget {
    /// Spin dephasing time in µs; `INFINITY` disables dephasing.
    pub t2_us: f64,
    /// Atomic Hadamard error probability.
    pub p: f64,
    pub t_cycle_ns: f64,
    /// Largest implemented `CR_k`.
    pub cutoff: u32,
    pub gates: GateQuality,
}

impl NoiseBudget {
    pub fn new(
        t2_us: f64,
        p: f64,
        t_cycle_ns: f64,
        cutoff: u32,
        gates: GateQuality,
    ) -> Result<Self> {
        let b = Self {
            t2_us,
            p,
            t_cycle_ns,
            cutoff,
            gates,
        };
        b.check()?;
        Ok(b)
    }

    pub fn ideal(t2_us: f64, p: f64, t_cycle_ns: f64) -> Result<Self> {
        Self::new(t2_us, p, t_cycle_ns, 1, GateQuality::Ideal)
    }

    fn check(&self) -> Result<()> {
        if !(self.t2_us > 0.0) {
            return Err(Error::InvalidParams(format!(
                "T2 must be positive, got {} us",
                self.t2_us
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParams(format!(
                "p = {} outside [0, 1]",
                self.p
            )));
        }
        if !(self.t_cycle_ns >= 0.0 && self.t_cycle_ns.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "T_cycle = {} ns",
                self.t_cycle_ns
            )));
        }
        if self.cutoff == 0 {
            return Err(Error::InvalidParams("cutoff K must be at least 1".into()));
        }
        Ok(())
    }

    pub fn d_p(&self) -> f64 {
        term_dp(self.t_cycle_ns, self.t2_us * 1e3)
    }
}

/// Solved reflection for one `CR_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateEntry {
    pub k: u32,
    pub delta_s_ghz: f64,
    pub r_up_abs: f64,
    pub r_down_abs: f64,
    pub d_k: f64,
    pub d_k_approx: f64,
}

/// A budget with its gate table solved once, reusable across `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetModel {
    pub budget: NoiseBudget,
    /// Entries for `k = 1..=min(K, k_max)`; empty for ideal gates.
    pub gates: Vec<GateEntry>,
}

impl BudgetModel {
    /// Solves every `CR_k` with `k ≤ min(K, k_max)`.
    pub fn new(budget: NoiseBudget, k_max: usize) -> Result<Self> {
        budget.check()?;
        let gates = match budget.gates {
            GateQuality::Ideal => Vec::new(),
            GateQuality::Cavity {
                params,
                delta_s_max_ghz,
            } => {
                let base = default_operating_point(&params)?;
                let top = (budget.cutoff as usize).min(k_max) as u32;
                (1..=top)
                    .map(|k| {
                        let delta_s = solve_stark_shift(
                            &params,
                            base.delta_0,
                            base.delta_z,
                            k,
                            delta_s_max_ghz,
                        )?;
                        let op = base.with_stark_shift(delta_s);
                        let r = controlled_phase(&params, &op);
                        let delta = op.delta_up().abs().min(op.delta_down().abs());
                        Ok(GateEntry {
                            k,
                            delta_s_ghz: delta_s,
                            r_up_abs: r.r_up_abs(),
                            r_down_abs: r.r_down_abs(),
                            d_k: term_dk(r.r_up, r.r_down),
                            d_k_approx: term_dk_approx(params.cooperativity(), delta, params.kappa),
                        })
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self { budget, gates })
    }

    /// Largest `k` whose gate is implemented at `n` photons.
    fn top_k(&self, n: usize) -> usize {
        match self.budget.gates {
            GateQuality::Ideal => n,
            GateQuality::Cavity { .. } => (self.budget.cutoff as usize).min(n),
        }
    }

    fn d_k(&self, k: usize) -> Result<f64> {
        match self.budget.gates {
            GateQuality::Ideal => Ok(0.0),
            GateQuality::Cavity { .. } => self.gates.get(k - 1).map(|g| g.d_k).ok_or_else(|| {
                Error::InvalidParams(format!(
                    "gate table solved only up to k = {}",
                    self.gates.len()
                ))
            }),
        }
    }

    pub fn report(&self, n: usize) -> Result<DistanceReport> {
        if n == 0 {
            return Err(Error::InvalidParams("N must be at least 1".into()));
        }
        let nf = n as f64;
        let d_p = self.budget.d_p();
        let d_h = self.budget.p;
        let d1 = self.d_k(1)?;
        let top = self.top_k(n);
        let d_k = (2..=top)
            .map(|k| Ok((k as u32, self.d_k(k)?)))
            .collect::<Result<Vec<_>>>()?;
        let d_k_star: Vec<(u32, f64)> = (top + 1..=n)
            .map(|k| (k as u32, term_dk_star(k as u32)))
            .collect();
        let weight = |k: u32| (n - k as usize + 1) as f64;
        let sum_dk = d_k.iter().fold(0.0, |acc, &(k, d)| acc + weight(k) * d);
        let sum_dk_star = d_k_star
            .iter()
            .fold(0.0, |acc, &(k, d)| acc + weight(k) * d);
        let total = nf * nf * d_p + 2.0 * nf * d_h + 3.0 * nf * d1 + sum_dk + sum_dk_star;
        Ok(DistanceReport {
            n,
            d_p,
            d_h,
            d1,
            d_k,
            d_k_star,
            sum_dk,
            sum_dk_star,
            total,
            success_raw: 1.0 - total,
            success: (1.0 - total).max(0.0),
        })
    }
}

/// Itemised budget at one photon number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub n: usize,
    pub d_p: f64,
    pub d_h: f64,
    pub d1: f64,
    /// `(k, d_k)` for `2 ≤ k ≤ min(K, N)`.
    pub d_k: Vec<(u32, f64)>,
    /// `(k, d_k*)` for `K < k ≤ N`.
    pub d_k_star: Vec<(u32, f64)>,
    /// `∑ (N − k + 1)·d_k`
    pub sum_dk: f64,
    /// `∑ (N − k + 1)·d_k*`
    pub sum_dk_star: f64,
    /// `D`
    pub total: f64,
    /// `1 − D`, possibly negative.
    pub success_raw: f64,
    /// `max(0, 1 − D)`
    pub success: f64,
}

pub fn total_distance(n: usize, budget: &NoiseBudget) -> Result<DistanceReport> {
    BudgetModel::new(*budget, n)?.report(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhotonLimit {
    Bounded(usize),
    /// The bound stayed positive up to [`PHOTON_SCAN_CAP`].
    Unbounded,
}

/// Largest `N` with `1 − D > 0`, found by an increasing scan.
pub fn max_photons(budget: &NoiseBudget) -> Result<PhotonLimit> {
    let model = BudgetModel::new(*budget, budget.cutoff as usize)?;
    let noiseless =
        budget.d_p() == 0.0 && budget.p == 0.0 && model.gates.iter().all(|g| g.d_k == 0.0);
    if noiseless && budget.gates == GateQuality::Ideal {
        return Ok(PhotonLimit::Unbounded);
    }
    for n in 1..=PHOTON_SCAN_CAP {
        if model.report(n)?.success_raw <= 0.0 {
            return Ok(PhotonLimit::Bounded(n - 1));
        }
    }
    Ok(PhotonLimit::Unbounded)
}
