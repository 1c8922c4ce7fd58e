use std::f64::consts::TAU;

use proptest::prelude::*;

use pqft_core::analysis::{
    postselection_distance, term_dk, total_distance, GateQuality, MeasurementDiag, NoiseBudget,
};
use pqft_core::cavity::{
    controlled_phase, cr_phase, default_operating_point, reflection, solve_stark_shift,
    CavityParams,
};
use pqft_core::circuit::{lossy_reflection, CircuitProgram, DensityMatrix, GateOp, StateVector};
use pqft_core::linalg::trace_distance;
use pqft_core::params::{QD_GAMMA_GHZ, QD_KAPPA_GHZ, STARK_MAX_GHZ};
use pqft_core::scheduler::{compile_timeline, validate_timeline, TimingConfig};
use pqft_core::Complex64;

fn state(photons: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << (photons + 1))
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(move |v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let amps = v
                .into_iter()
                .map(|(a, b)| Complex64::new(a / norm, b / norm))
                .collect();
            StateVector::from_amplitudes(photons, amps).unwrap()
        })
}

fn gate(photons: usize) -> impl Strategy<Value = GateOp> {
    let j = 1..=photons;
    prop_oneof![
        Just(GateOp::HadamardAtom),
        j.clone().prop_map(GateOp::HadamardPhoton),
        j.clone().prop_map(GateOp::HadamardPair),
        (1u32..=8, j.clone()).prop_map(|(k, photon)| GateOp::ControlledPhase { k, photon }),
        j.clone().prop_map(GateOp::Swap),
        (-10.0f64..10.0, j).prop_map(|(angle, photon)| GateOp::PhaseFix { photon, angle }),
    ]
}

fn wrap(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

proptest! {
    #[test]
    fn reflection_is_passive(g in 0.0f64..50.0, kappa in 0.01f64..5.0, gamma in 0.1f64..100.0, delta in -2000.0f64..2000.0) {
        let params = CavityParams::new(g, kappa, gamma).unwrap();
        prop_assert!(reflection(&params, delta).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn reflection_phase_is_odd(c in 1.5f64..2000.0, delta in -500.0f64..500.0) {
        let params = CavityParams::with_cooperativity(c, QD_KAPPA_GHZ, QD_GAMMA_GHZ).unwrap();
        let sum = reflection(&params, delta).arg() + reflection(&params, -delta).arg();
        let w = wrap(sum);
        prop_assert!(w < 1e-9 || TAU - w < 1e-9, "sum {sum}");
    }

    #[test]
    fn stark_solution_round_trips(k in 1u32..=14) {
        let params = CavityParams::quantum_dot();
        let base = default_operating_point(&params).unwrap();
        let ds = solve_stark_shift(&params, base.delta_0, base.delta_z, k, STARK_MAX_GHZ).unwrap();
        prop_assert!((0.0..=STARK_MAX_GHZ).contains(&ds));
        let dt = controlled_phase(&params, &base.with_stark_shift(ds)).delta_theta;
        prop_assert!((dt - cr_phase(k)).abs() <= 1e-9);
    }

    #[test]
    fn stark_solution_round_trips_across_cooperativity(c in 20.0f64..1000.0, k in 1u32..=8) {
        let params = CavityParams::with_cooperativity(c, QD_KAPPA_GHZ, QD_GAMMA_GHZ).unwrap();
        let base = default_operating_point(&params).unwrap();
        let ds = solve_stark_shift(&params, base.delta_0, base.delta_z, k, 1e6).unwrap();
        let dt = controlled_phase(&params, &base.with_stark_shift(ds)).delta_theta;
        prop_assert!((dt - cr_phase(k)).abs() <= 1e-9);
    }

    #[test]
    fn unitary_gates_preserve_norm(psi in state(3), gates in prop::collection::vec(gate(3), 1..20)) {
        let mut psi = psi;
        for g in &gates {
            psi.apply_gate(g).unwrap();
        }
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_tracks_pure_state(psi in state(2), gates in prop::collection::vec(gate(2), 1..12)) {
        let mut rho = DensityMatrix::from_pure(&psi).unwrap();
        let mut psi = psi;
        for g in &gates {
            psi.apply_gate(g).unwrap();
            rho.apply_gate(g).unwrap();
        }
        let expected = DensityMatrix::from_pure(&psi).unwrap().to_matrix();
        prop_assert!((rho.to_matrix() - expected).norm() < 1e-12);
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn program_text_round_trips(gates in prop::collection::vec(gate(4), 0..30)) {
        let program = CircuitProgram::new(4, 8, gates).unwrap();
        let back = CircuitProgram::from_text(&program.to_text()).unwrap();
        prop_assert_eq!(back, program);
    }

    #[test]
    fn reflection_distance_in_unit_interval(a in 0.0f64..=1.0, b in 0.0f64..=1.0, pa in 0.0..TAU, pb in 0.0..TAU) {
        let d = term_dk(Complex64::from_polar(a, pa), Complex64::from_polar(b, pb));
        prop_assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn closed_form_is_scale_invariant(v in prop::collection::vec(0.01f64..1.0, 2..6), s in 0.1f64..10.0) {
        let m = MeasurementDiag::new(v.clone()).unwrap();
        let scaled = MeasurementDiag::new(v.iter().map(|x| x * s).collect()).unwrap();
        prop_assert!((postselection_distance(&m).unwrap() - postselection_distance(&scaled).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn lossy_reflection_within_closed_form(psi in state(2), k in 1u32..=4, r_up in 0.05f64..=1.0, r_down in 0.05f64..=1.0) {
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let mut ideal = rho.clone();
        ideal.apply_gate(&GateOp::ControlledPhase { k, photon: 2 }).unwrap();
        let Ok((mut out, _)) = lossy_reflection(rho, k, 2, r_up, r_down) else {
            return Ok(());
        };
        out.normalize().unwrap();
        let m = r_up.min(r_down);
        let d = trace_distance(&out.to_matrix(), &ideal.to_matrix());
        prop_assert!(d <= (1.0 - m) / (1.0 + m) + 1e-10);
    }

    #[test]
    fn budget_monotone_in_each_parameter(
        n in 1usize..60,
        p in 0.0f64..0.05,
        t2 in 1.0f64..200.0,
        t_cycle in 0.5f64..20.0,
    ) {
        let d = |n: usize, p: f64, t2: f64, tc: f64| total_distance(n, &NoiseBudget::ideal(t2, p, tc).unwrap()).unwrap().total;
        let base = d(n, p, t2, t_cycle);
        prop_assert!(d(n + 1, p, t2, t_cycle) >= base);
        prop_assert!(d(n, p + 0.01, t2, t_cycle) >= base);
        prop_assert!(d(n, p, t2 * 2.0, t_cycle) <= base);
        prop_assert!(d(n, p, t2, t_cycle * 2.0) >= base);
    }

    #[test]
    fn report_terms_and_total(n in 1usize..40, c in 30.0f64..1500.0, cutoff in 1u32..=10) {
        let params = CavityParams::with_cooperativity(c, QD_KAPPA_GHZ, QD_GAMMA_GHZ).unwrap();
        let budget = NoiseBudget::new(20.0, 0.001, 5.0, cutoff, GateQuality::Cavity { params, delta_s_max_ghz: 1e6 }).unwrap();
        let r = total_distance(n, &budget).unwrap();
        let nf = n as f64;
        let terms = r.d_k.iter().chain(&r.d_k_star).map(|e| e.1).chain([r.d_p, r.d_h, r.d1]);
        for t in terms {
            prop_assert!((0.0..=1.0).contains(&t));
        }
        let weighted: f64 = r.d_k.iter().chain(&r.d_k_star).map(|&(k, d)| (n - k as usize + 1) as f64 * d).sum();
        let expected = nf * nf * r.d_p + 2.0 * nf * r.d_h + 3.0 * nf * r.d1 + weighted;
        prop_assert!((r.total - expected).abs() < 1e-12);
        prop_assert_eq!(r.success, r.success_raw.max(0.0));
    }

    #[test]
    fn budget_non_increasing_in_cooperativity(n in 1usize..50, c in 30.0f64..800.0) {
        let d = |c: f64| {
            let params = CavityParams::with_cooperativity(c, QD_KAPPA_GHZ, QD_GAMMA_GHZ).unwrap();
            let b = NoiseBudget::new(20.0, 0.001, 5.0, 10, GateQuality::Cavity { params, delta_s_max_ghz: 1e6 }).unwrap();
            total_distance(n, &b).unwrap().total
        };
        prop_assert!(d(c * 1.5) <= d(c));
    }

    #[test]
    fn random_timings_validate(n in 1usize..12, cutoff_frac in 0.0f64..1.0, t in 0.5f64..20.0, slack in 0.01f64..5.0, short in 0.01f64..0.99) {
        let cutoff = 1 + ((n - 1) as f64 * cutoff_frac) as u32;
        let cfg = TimingConfig::new(n, t, n as f64 * t + slack * t, short * t / 10.0).unwrap();
        let timeline = compile_timeline(&cfg, cutoff).unwrap();
        let report = validate_timeline(&timeline);
        prop_assert!(report.is_valid(), "{:?}", report.violations);
        // The N² idle bound needs the long delay to stay within one extra cycle.
        if slack <= 1.0 {
            prop_assert!(report.idle_cycles <= n * n);
        }
    }
}
