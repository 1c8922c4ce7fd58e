//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p pqft-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pqft_core::analysis::term_dk;
use pqft_core::analysis::{
    fig4, fig5a, fig5b, max_photons, sweep_success, total_distance, validate_bound_small_n,
    NoiseBudget, OracleConfig, PhotonLimit, Scenario,
};
use pqft_core::cavity::{
    controlled_phase, default_operating_point, solve_stark_shift, stark_shift_estimate,
    zeeman_splitting, CavityParams, ZeemanConfig,
};
use pqft_core::error::Error;
use pqft_core::params::*;
use pqft_core::validation::{
    bound_budgets, oracle_check, qft_equivalence_error, scheduler_matches, swap_identity_error,
};

type Check = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn operating_point() -> Check {
    let op = default_operating_point(&CavityParams::quantum_dot()).map_err(|e| e.to_string())?;
    verdict(
        (op.delta_0 - QD_DELTA_0_GHZ).abs() <= 0.01,
        format!("delta_0 = {:.6} GHz (target 8.64 +- 0.01)", op.delta_0),
    )
}

fn zeeman() -> Check {
    let op = default_operating_point(&CavityParams::quantum_dot()).map_err(|e| e.to_string())?;
    let z = zeeman_splitting(&ZeemanConfig::quantum_dot());
    let rel = (z - 2.0 * op.delta_0).abs() / (2.0 * op.delta_0);
    verdict(
        rel <= 0.005,
        format!(
            "Zeeman {z:.4} GHz vs 2*delta_0 {:.4} GHz, rel {rel:.2e}",
            2.0 * op.delta_0
        ),
    )
}

fn pi_point() -> Check {
    let params = CavityParams::quantum_dot();
    let op = default_operating_point(&params).map_err(|e| e.to_string())?;
    let dt = controlled_phase(&params, &op).delta_theta;
    let err = (dt - std::f64::consts::PI).abs();
    verdict(err <= 1e-9, format!("delta_theta - pi = {err:.2e} rad"))
}

fn tuning_reach() -> Check {
    let params = CavityParams::quantum_dot();
    let op = default_operating_point(&params).map_err(|e| e.to_string())?;
    let mut worst_rel: f64 = 0.0;
    for k in 1..=STARK_MAX_K {
        let ds = solve_stark_shift(&params, op.delta_0, op.delta_z, k, STARK_MAX_GHZ)
            .map_err(|e| format!("k = {k}: {e}"))?;
        if k >= 8 {
            worst_rel = worst_rel.max(
                (ds - stark_shift_estimate(&params, k)).abs() / stark_shift_estimate(&params, k),
            );
        }
    }
    let k15 = solve_stark_shift(
        &params,
        op.delta_0,
        op.delta_z,
        STARK_MAX_K + 1,
        STARK_MAX_GHZ,
    );
    let rejected = matches!(k15, Err(Error::OutOfRange { k: 15, .. }));
    verdict(
        rejected && worst_rel <= 0.10,
        format!("k <= 14 solved, k = 15 out of range: {rejected}, worst deviation from estimate (k >= 8) {worst_rel:.2e}"),
    )
}

fn swap_identity() -> Check {
    let e = swap_identity_error().map_err(|e| e.to_string())?;
    verdict(e <= 1e-12, format!("operator-norm error {e:.2e}"))
}

fn qft_equivalence() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        worst = worst.max(qft_equivalence_error(n).map_err(|e| e.to_string())?);
    }
    within(Duration::from_secs(30), start.elapsed())?;
    verdict(
        worst <= 1e-10,
        format!(
            "n <= 8, max amplitude error {worst:.2e}, {:.2?}",
            start.elapsed()
        ),
    )
}

fn scheduler_equivalence() -> Check {
    let start = Instant::now();
    for n in 1..=16 {
        for k in 1..=n as u32 {
            if !scheduler_matches(n, k).map_err(|e| e.to_string())? {
                return Err(format!("mismatch at n = {n}, K = {k}"));
            }
        }
    }
    within(Duration::from_secs(5), start.elapsed())?;
    Ok(format!(
        "n <= 16, K <= n all equal, {:.2?}",
        start.elapsed()
    ))
}

fn oracle() -> Check {
    let start = Instant::now();
    let d = oracle_check(&term_dk, 50, &OracleConfig::default()).map_err(|e| e.to_string())?;
    within(Duration::from_secs(120), start.elapsed())?;
    verdict(
        d.closed_form <= 1e-4 && d.ancilla <= 1e-6,
        format!(
            "closed form vs oracle {:.2e}, ancilla vs ancilla-free {:.2e}, {:.2?}",
            d.closed_form,
            d.ancilla,
            start.elapsed()
        ),
    )
}

fn crossings() -> Check {
    let b = NoiseBudget::ideal(5.0, 0.01, T_CYCLE_NS).map_err(|e| e.to_string())?;
    let limit = max_photons(&b).map_err(|e| e.to_string())?;
    let inf = NoiseBudget::ideal(f64::INFINITY, 0.01, T_CYCLE_NS).map_err(|e| e.to_string())?;
    let raw50 = total_distance(50, &inf)
        .map_err(|e| e.to_string())?
        .success_raw;
    let limit_ok = matches!(limit, PhotonLimit::Bounded(29 | 30));
    verdict(
        limit_ok && raw50 == 0.0,
        format!("max_photons(T2 = 5 us) = {limit:?} (want 29 or 30), raw 1 - D at N = 50 with T2 = inf: {raw50:e}"),
    )
}

fn curves(scenarios: &[Scenario]) -> Result<Vec<Vec<f64>>, String> {
    scenarios
        .iter()
        .map(|s| {
            Ok(s.reports()
                .map_err(|e| e.to_string())?
                .iter()
                .map(|r| r.success)
                .collect())
        })
        .collect()
}

fn fig4_properties() -> Check {
    let start = Instant::now();
    let scenarios = fig4().map_err(|e| e.to_string())?;
    let ps = curves(&scenarios)?;
    let monotone_n = ps.iter().all(|c| c.windows(2).all(|w| w[1] <= w[0]));
    // scenarios[1..] are in increasing cooperativity
    let monotone_c = ps[1..]
        .windows(2)
        .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| b >= a));
    let c400 = scenarios
        .iter()
        .position(|s| s.id == "fig4_C400.00")
        .ok_or("no C = 400 curve")?;
    let gap = (ps[0][29] - ps[c400][29]).abs();
    within(Duration::from_secs(10), start.elapsed())?;
    verdict(
        monotone_n && monotone_c && gap < 0.01,
        format!(
            "non-increasing in N: {monotone_n}, non-decreasing in C: {monotone_c}, ideal - C400 at N = 30: {gap:.4} (want < 0.01)"
        ),
    )
}

fn bound_validation() -> Check {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (label, budget) in bound_budgets().map_err(|e| e.to_string())? {
        for n in [2, 3] {
            let r = validate_bound_small_n(n, &budget, DEFAULT_SEED)
                .map_err(|e| format!("{label} n = {n}: {e}"))?;
            parts.push(format!(
                "{label} n={n} {:.3e} <= {:.3e}",
                r.max_trace_distance, r.bound
            ));
        }
    }
    within(Duration::from_secs(120), start.elapsed())?;
    Ok(parts.join(", "))
}

fn figures() -> Check {
    let mut all = fig4().map_err(|e| e.to_string())?;
    all.extend(fig5a().map_err(|e| e.to_string())?);
    all.extend(fig5b().map_err(|e| e.to_string())?);
    let render = |s: &[Scenario]| -> Result<Vec<u8>, String> {
        let mut buf = Vec::new();
        sweep_success(s)
            .map_err(|e| e.to_string())?
            .write_csv(&mut buf)
            .map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let first = render(&all)?;
    let second = render(&all)?;
    let rows = first.iter().filter(|&&b| b == b'\n').count() - 1;
    let expected = all.len() * FIGURE_N_MAX;
    let in_range = curves(&all)?
        .iter()
        .flatten()
        .all(|p| (0.0..=1.0).contains(p));
    verdict(
        first == second && rows == expected && in_range,
        format!(
            "{} curves, {rows} rows (want {expected}), deterministic: {}",
            all.len(),
            first == second
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("operating point", operating_point),
        ("Zeeman splitting", zeeman),
        ("pi point", pi_point),
        ("tuning reach", tuning_reach),
        ("SWAP identity", swap_identity),
        ("QFT equivalence", qft_equivalence),
        ("scheduler equivalence", scheduler_equivalence),
        ("post-selection oracle", oracle),
        ("budget crossings", crossings),
        ("cooperativity curves", fig4_properties),
        ("bound validation", bound_validation),
        ("figure reproduction", figures),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
