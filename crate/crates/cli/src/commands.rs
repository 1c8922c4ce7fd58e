use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use pqft_core::analysis::{
    max_photons, noise_model, parse_scenarios, preset, sweep_success, term_dk_star, BudgetModel,
    GateQuality, NoiseBudget, OracleConfig, PhotonLimit,
};
use pqft_core::cavity::{
    default_operating_point, marks_table, phase_curve, phase_curve_table, solve_marks, CavityParams,
};
use pqft_core::circuit::{
    build_qft_program, read_qft_output, simulate_noisy, simulate_program, DensityMatrix,
    QuantumState, StateVector,
};
use pqft_core::export::{sci, CsvTable};
use pqft_core::linalg::trace_distance;
use pqft_core::params::*;
use pqft_core::scheduler::{
    compile_timeline, timeline_to_program, validate_timeline, TimingConfig,
};
use pqft_core::validation::{
    bound_suite, oracle_suite, qft_equivalence_suite, run_all, scheduler_equivalence_suite,
    swap_identity_suite,
};
use pqft_core::Complex64;

use crate::config::{self, PhaseCurveArgs, SimulateArgs, SuccessArgs, TimelineArgs, ValidateArgs};
use crate::output::{write_json, write_table};
use crate::{Failure, Format, OutputArgs};

type CmdResult = Result<(), Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn marks_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("phase_curve");
    out.with_file_name(format!("{stem}_marks.csv"))
}

pub fn cmd_phase_curve(a: PhaseCurveArgs) -> CmdResult {
    let file: config::PhaseCurveFile = config::load(a.config.as_deref())?;
    let params = CavityParams::new(
        a.g.or(file.g).unwrap_or(QD_G_GHZ),
        a.kappa.or(file.kappa).unwrap_or(QD_KAPPA_GHZ),
        a.gamma.or(file.gamma).unwrap_or(QD_GAMMA_GHZ),
    )?;
    let start = a.start.or(file.start).unwrap_or(0.0);
    let stop = a.stop.or(file.stop).unwrap_or(1500.0);
    if !(start.is_finite() && stop.is_finite()) {
        return Err(invalid("Stark shift range must be finite"));
    }
    let points = a.points.or(file.points).unwrap_or(301);
    let k_max = a.k_max.or(file.k_max).unwrap_or(10);
    let delta_s_max = a.delta_s_max.or(file.delta_s_max).unwrap_or(STARK_MAX_GHZ);

    let base = default_operating_point(&params)?;
    let curve = phase_curve_table(&phase_curve(&params, &base, start, stop, points));
    let marks = marks_table(&params, &solve_marks(&params, k_max, delta_s_max)?);

    match a.output.format {
        Format::Json => write_json(
            &a.output,
            &json!({ "curve": curve.to_json(), "marks": marks.to_json() }),
        ),
        Format::Csv => {
            write_table(&a.output, &curve, Value::default)?;
            let marks_out = a
                .marks_out
                .or_else(|| a.output.out.as_deref().map(marks_path));
            match marks_out {
                Some(path) => write_table(
                    &OutputArgs {
                        out: Some(path),
                        ..a.output.clone()
                    },
                    &marks,
                    Value::default,
                ),
                None => {
                    println!();
                    write_table(&a.output, &marks, Value::default)
                }
            }
        }
    }
}

pub fn cmd_success(a: SuccessArgs) -> CmdResult {
    let mut scenarios = match (&a.preset, &a.config) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            parse_scenarios(&text)?
        }
        (None, None) => return Err(invalid("either --preset or --config is required")),
    };
    if let Some(n) = a.n_max {
        if n == 0 {
            return Err(invalid("--n-max must be at least 1"));
        }
        scenarios.iter_mut().for_each(|s| s.n_max = n);
    }
    let table = sweep_success(&scenarios)?;
    write_table(&a.output, &table, || table.to_json())?;
    for s in &scenarios {
        let limit = match max_photons(&s.budget)? {
            PhotonLimit::Bounded(n) => n.to_string(),
            PhotonLimit::Unbounded => "unbounded".into(),
        };
        eprintln!("{}: largest N with positive bound = {limit}", s.id);
    }
    Ok(())
}

fn parse_bits(bits: &str, n: usize) -> Result<usize, Failure> {
    if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(invalid(format!(
            "--input must be {n} characters of 0 and 1, got '{bits}'"
        )));
    }
    Ok(usize::from_str_radix(bits, 2).expect("validated bitstring"))
}

fn read_state_file(path: &Path, n: usize) -> Result<StateVector, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
        .map_err(|e| invalid(format!("{}: expected [[re, im], ...]: {e}", path.display())))?;
    let amps: Vec<Complex64> = pairs
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    Ok(StateVector::from_photon_amplitudes(n, &amps)?)
}

pub fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let file: config::SimulateFile = config::load(a.config.as_deref())?;
    let n = a
        .photons
        .or(file.photons)
        .ok_or_else(|| invalid("--photons is required"))?;
    if n == 0 {
        return Err(invalid("--photons must be at least 1"));
    }
    let cutoff = a.cutoff.or(file.cutoff).unwrap_or(n as u32);
    let p = a.p.or(file.p).unwrap_or(0.0);
    let t2_us = a
        .t2_us
        .or(file.t2_us.map(|t| t.value()))
        .unwrap_or(f64::INFINITY);
    let cooperativity = a.cooperativity.or(file.cooperativity);
    let delta_s_max = a.delta_s_max.or(file.delta_s_max).unwrap_or(STARK_MAX_GHZ);
    let t_cycle = a.t_cycle.or(file.t_cycle).unwrap_or(T_CYCLE_NS);

    let psi = match (a.input.or(file.input), a.state_file.or(file.state_file)) {
        (Some(_), Some(_)) => {
            return Err(invalid(
                "give either an input bitstring or a state file, not both",
            ))
        }
        (None, Some(path)) => read_state_file(&path, n)?,
        (bits, None) => {
            let x = match bits {
                Some(b) => parse_bits(&b, n)?,
                None => 0,
            };
            StateVector::from_photon_bits(n, x)?
        }
    };

    let noisy = p > 0.0 || t2_us.is_finite() || cooperativity.is_some();
    if !noisy {
        let program = build_qft_program(n, cutoff)?;
        let QuantumState::Pure(out) = simulate_program(&program, QuantumState::Pure(psi))? else {
            unreachable!("pure input stays pure")
        };
        let (y_amps, leak) = read_qft_output(&out);
        let mut table = CsvTable::new(&["y", "re", "im", "prob"]);
        for (y, amp) in y_amps.iter().enumerate() {
            table.push(vec![
                y.to_string(),
                sci(amp.re),
                sci(amp.im),
                sci(amp.norm_sqr()),
            ]);
        }
        return write_table(
            &a.output,
            &table,
            || json!({ "photons": n, "cutoff": cutoff, "amplitudes": table.to_json(), "leak": sci(leak).parse::<f64>().ok() }),
        );
    }

    let gates = match cooperativity {
        Some(c) => GateQuality::Cavity {
            params: CavityParams::with_cooperativity(c, QD_KAPPA_GHZ, QD_GAMMA_GHZ)?,
            delta_s_max_ghz: delta_s_max,
        },
        None => GateQuality::Ideal,
    };
    let budget = NoiseBudget::new(t2_us, p, t_cycle, cutoff, gates)?;
    let model = BudgetModel::new(budget, n)?;
    let mut bound = model.report(n)?.total;
    if gates == GateQuality::Ideal {
        // The ideal-gate budget has no truncation terms; add them back for
        // an explicitly truncated program.
        bound += (cutoff as usize + 1..=n)
            .map(|k| (n - k + 1) as f64 * term_dk_star(k as u32))
            .sum::<f64>();
    }
    let timeline = compile_timeline(
        &TimingConfig::with_defaults(n, t_cycle)?,
        cutoff.min(n as u32),
    )?;
    let program = timeline_to_program(&timeline)?;
    let times: Vec<f64> = timeline.timed_gates().into_iter().map(|(t, _)| t).collect();
    let run = simulate_noisy(
        &program,
        DensityMatrix::from_pure(&psi)?,
        &noise_model(&model),
        Some(&times),
    )?;
    let ideal = simulate_program(&build_qft_program(n, n as u32)?, QuantumState::Pure(psi))?
        .to_density()?;
    let distance = trace_distance(&run.state.to_matrix(), &ideal.to_matrix());

    let dim = run.state.dim();
    let mut table = CsvTable::new(&["row", "col", "re", "im"]);
    for r in 0..dim {
        for c in 0..dim {
            let z = run.state.get(r, c);
            table.push(vec![r.to_string(), c.to_string(), sci(z.re), sci(z.im)]);
        }
    }
    let num = |x: f64| sci(x).parse::<f64>().ok();
    write_table(&a.output, &table, || {
        let rows: Vec<Value> = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| {
                        let z = run.state.get(r, c);
                        json!([num(z.re), num(z.im)])
                    })
                    .collect()
            })
            .collect();
        json!({
            "photons": n,
            "cutoff": cutoff,
            "postselection_weight": num(run.weight),
            "trace_distance": num(distance),
            "bound_D": num(bound),
            "density": rows,
        })
    })?;
    eprintln!(
        "trace distance to ideal output {}, bound D {}",
        sci(distance),
        sci(bound)
    );
    if distance > bound + 1e-12 {
        return Err(Failure::Violation(format!(
            "trace distance {} exceeds D = {}",
            sci(distance),
            sci(bound)
        )));
    }
    Ok(())
}

pub fn cmd_timeline(a: TimelineArgs) -> CmdResult {
    let file: config::TimelineFile = config::load(a.config.as_deref())?;
    let n = a
        .photons
        .or(file.photons)
        .ok_or_else(|| invalid("--photons is required"))?;
    let cutoff = a.cutoff.or(file.cutoff).unwrap_or(n as u32);
    let t_cycle = a.t_cycle.or(file.t_cycle).unwrap_or(T_CYCLE_NS);
    let tau1 = a
        .tau1
        .or(file.tau1_ns)
        .unwrap_or((n as f64 + 1.0) * t_cycle);
    let tau2 = a.tau2.or(file.tau2_ns).unwrap_or(t_cycle / 20.0);
    let cfg = TimingConfig::new(n, t_cycle, tau1, tau2)?;
    let timeline = compile_timeline(&cfg, cutoff)?;
    let report = validate_timeline(&timeline);
    let equivalent = if a.check_equivalence {
        Some(timeline_to_program(&timeline)? == build_qft_program(n, cutoff)?)
    } else {
        None
    };

    let table = timeline.to_table();
    write_table(&a.output, &table, || {
        json!({
            "events": table.to_json(),
            "report": serde_json::to_value(&report).unwrap_or(Value::Null),
            "equivalent": equivalent,
        })
    })?;

    let reflects = timeline
        .events
        .iter()
        .filter(|e| e.kind.name() == "reflect")
        .count();
    eprintln!(
        "{reflects} reflections, makespan {:.3} cycles, {} busy / {} idle cycles, {} violations",
        report.makespan_cycles,
        report.busy_cycles,
        report.idle_cycles,
        report.violations.len()
    );
    for v in &report.violations {
        eprintln!("  {v:?}");
    }
    if let Some(eq) = equivalent {
        eprintln!(
            "equivalence with gate program: {}",
            if eq { "equal" } else { "different" }
        );
    }
    if !report.is_valid() {
        return Err(Failure::Violation(format!(
            "{} timeline violations",
            report.violations.len()
        )));
    }
    if equivalent == Some(false) {
        return Err(Failure::Violation(
            "timeline differs from the gate program".into(),
        ));
    }
    Ok(())
}

pub fn cmd_validate(a: ValidateArgs) -> CmdResult {
    let seed = a.output.seed;
    let suites = if a.quick {
        let cfg = OracleConfig {
            restarts: 20,
            seed,
            ..OracleConfig::default()
        };
        vec![
            swap_identity_suite(),
            qft_equivalence_suite(5),
            scheduler_equivalence_suite(8),
            oracle_suite(5, &cfg),
            bound_suite(seed),
        ]
    } else {
        run_all(seed)
    };
    for s in &suites {
        println!(
            "{} {}: {}",
            if s.passed { "PASS" } else { "FAIL" },
            s.name,
            s.detail
        );
    }
    if a.output.out.is_some() {
        let mut table = CsvTable::new(&["suite", "passed", "detail"]);
        for s in &suites {
            table.push(vec![
                s.name.to_string(),
                s.passed.to_string(),
                s.detail.clone(),
            ]);
        }
        write_table(&a.output, &table, || {
            serde_json::to_value(&suites).unwrap_or(Value::Null)
        })?;
    }
    let failed: Vec<&str> = suites
        .iter()
        .filter(|s| !s.passed)
        .map(|s| s.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "failing suites: {}",
            failed.join(", ")
        )))
    }
}
