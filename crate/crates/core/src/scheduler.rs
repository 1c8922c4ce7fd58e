//! Discrete-event model of the delay-loop hardware.
//!
//! Photons are injected one per operation cycle. In subroutine `s` the photon
//! `s` circulates through the short delay line `τ₂` for three `CR₁`
//! reflections (the atom-photon swap) and exits; every later photon reflects
//! once with the Stark shift set for `CR_{j−s+1}` and enters the long delay
//! line `τ₁`, which returns it to the input for subroutine `s + 1`.
//!
//! Reflections, switch changes and retuning are instantaneous. Events that
//! share a timestamp are ordered causally by their position in the event list.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitProgram, GateOp};
use crate::error::{Error, Result};
use crate::export::{sci, CsvTable};

/// Relative tolerance for timestamp comparisons.
const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    pub t_cycle_ns: f64,
    /// Long delay line, must exceed `n·T_cycle`.
    pub tau1_ns: f64,
    /// Short delay line, must stay below `T_cycle/10`.
    pub tau2_ns: f64,
    pub photons: usize,
}

impl TimingConfig {
    pub fn new(photons: usize, t_cycle_ns: f64, tau1_ns: f64, tau2_ns: f64) -> Result<Self> {
        let cfg = Self {
            t_cycle_ns,
            tau1_ns,
            tau2_ns,
            photons,
        };
        cfg.check()?;
        Ok(cfg)
    }

    /// `τ₁ = (n + 1)·T_cycle`, `τ₂ = T_cycle/20`.
    pub fn with_defaults(photons: usize, t_cycle_ns: f64) -> Result<Self> {
        Self::new(
            photons,
            t_cycle_ns,
            (photons as f64 + 1.0) * t_cycle_ns,
            t_cycle_ns / 20.0,
        )
    }

    fn check(&self) -> Result<()> {
        if self.photons == 0 {
            return Err(Error::InvalidTiming(
                "at least one photon is required".into(),
            ));
        }
        if !(self.t_cycle_ns.is_finite() && self.t_cycle_ns > 0.0) {
            return Err(Error::InvalidTiming(format!(
                "T_cycle must be positive, got {}",
                self.t_cycle_ns
            )));
        }
        if !(self.tau1_ns.is_finite() && self.tau1_ns > self.photons as f64 * self.t_cycle_ns) {
            return Err(Error::InvalidTiming(format!(
                "tau_1 = {} ns must exceed n*T_cycle = {} ns",
                self.tau1_ns,
                self.photons as f64 * self.t_cycle_ns
            )));
        }
        if !(self.tau2_ns > 0.0 && self.tau2_ns < self.t_cycle_ns / 10.0) {
            return Err(Error::InvalidTiming(format!(
                "tau_2 = {} ns must lie in (0, T_cycle/10 = {} ns)",
                self.tau2_ns,
                self.t_cycle_ns / 10.0
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwitchId {
    /// Selects fresh photons or photons returning from delay line 1.
    Input,
    /// Routes reflected photons to delay line 1, delay line 2 or the output.
    Router,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwitchPosition {
    Source,
    Feedback,
    Delay1,
    Delay2,
    Output,
}

/// Hadamards applied right after a reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HadamardAnnotation {
    None,
    /// `H_a ⊗ H_p`
    Pair,
    /// `H_p` only
    Photon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EventKind {
    Inject {
        photon: usize,
    },
    /// `setting` is the `k` of the programmed `CR_k`; `None` means the gate
    /// was truncated and the photon passes without a phase.
    Reflect {
        photon: usize,
        setting: Option<u32>,
        then: HadamardAnnotation,
    },
    EnterDelay1 {
        photon: usize,
    },
    EnterDelay2 {
        photon: usize,
    },
    SwitchSet {
        switch: SwitchId,
        position: SwitchPosition,
    },
    Emit {
        photon: usize,
    },
}

impl EventKind {
    pub fn photon(&self) -> Option<usize> {
        match *self {
            EventKind::Inject { photon }
            | EventKind::Reflect { photon, .. }
            | EventKind::EnterDelay1 { photon }
            | EventKind::EnterDelay2 { photon }
            | EventKind::Emit { photon } => Some(photon),
            EventKind::SwitchSet { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Inject { .. } => "inject",
            EventKind::Reflect { .. } => "reflect",
            EventKind::EnterDelay1 { .. } => "enter_delay1",
            EventKind::EnterDelay2 { .. } => "enter_delay2",
            EventKind::SwitchSet { .. } => "switch",
            EventKind::Emit { .. } => "emit",
        }
    }

    fn parameter(&self) -> String {
        match *self {
            EventKind::Reflect { setting, then, .. } => {
                let gate = setting.map_or_else(|| "pass".to_string(), |k| format!("CR{k}"));
                match then {
                    HadamardAnnotation::None => gate,
                    HadamardAnnotation::Pair => format!("{gate}+Hap"),
                    HadamardAnnotation::Photon => format!("{gate}+Hp"),
                }
            }
            EventKind::SwitchSet { switch, position } => {
                format!("{switch:?}:{position:?}").to_lowercase()
            }
            _ => String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimelineEvent {
    pub time_ns: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    pub config: TimingConfig,
    pub cutoff: u32,
    pub events: Vec<TimelineEvent>,
}

impl Timeline {
    /// Gates in time order with the timestamp of the reflection that carries
    /// them.
    pub fn timed_gates(&self) -> Vec<(f64, GateOp)> {
        let mut out = Vec::new();
        for ev in &self.events {
            if let EventKind::Reflect {
                photon,
                setting,
                then,
            } = ev.kind
            {
                if let Some(k) = setting {
                    out.push((ev.time_ns, GateOp::ControlledPhase { k, photon }));
                }
                match then {
                    HadamardAnnotation::None => {}
                    HadamardAnnotation::Pair => {
                        out.push((ev.time_ns, GateOp::HadamardPair(photon)))
                    }
                    HadamardAnnotation::Photon => {
                        out.push((ev.time_ns, GateOp::HadamardPhoton(photon)))
                    }
                }
            }
        }
        out
    }

    pub fn to_table(&self) -> CsvTable {
        let mut table = CsvTable::new(&TIMELINE_HEADER);
        for ev in &self.events {
            table.push(vec![
                sci(ev.time_ns),
                ev.kind.name().to_string(),
                ev.kind.photon().map(|p| p.to_string()).unwrap_or_default(),
                ev.kind.parameter(),
            ]);
        }
        table
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.to_table().write_csv(out)
    }
}

pub const TIMELINE_HEADER: [&str; 4] = ["time_ns", "event_kind", "photon", "parameter"];

/// Builds the full event schedule for `cfg.photons` photons, dropping
/// `CR_k` phases above `cutoff`.
pub fn compile_timeline(cfg: &TimingConfig, cutoff: u32) -> Result<Timeline> {
    cfg.check()?;
    if cutoff == 0 {
        return Err(Error::InvalidTiming("cutoff K must be at least 1".into()));
    }
    let n = cfg.photons;
    let t_cycle = cfg.t_cycle_ns;
    let mut events = Vec::new();
    let mut push = |time_ns: f64, kind: EventKind| events.push(TimelineEvent { time_ns, kind });

    push(
        0.0,
        EventKind::SwitchSet {
            switch: SwitchId::Input,
            position: SwitchPosition::Source,
        },
    );
    for j in 1..=n {
        push((j - 1) as f64 * t_cycle, EventKind::Inject { photon: j });
    }

    let mut router: Option<SwitchPosition> = None;
    let mut set_router =
        |push: &mut dyn FnMut(f64, EventKind), t: f64, position: SwitchPosition| {
            if router != Some(position) {
                router = Some(position);
                push(
                    t,
                    EventKind::SwitchSet {
                        switch: SwitchId::Router,
                        position,
                    },
                );
            }
        };

    for s in 1..=n {
        for j in s..=n {
            let t = (j - 1) as f64 * t_cycle + (s - 1) as f64 * cfg.tau1_ns;
            if s == 2 && j == 2 {
                push(
                    t,
                    EventKind::SwitchSet {
                        switch: SwitchId::Input,
                        position: SwitchPosition::Feedback,
                    },
                );
            }
            if j == s {
                set_router(&mut push, t, SwitchPosition::Delay2);
                for pass in 0..3 {
                    let tp = t + pass as f64 * cfg.tau2_ns;
                    let then = if pass < 2 {
                        HadamardAnnotation::Pair
                    } else {
                        HadamardAnnotation::Photon
                    };
                    if pass == 2 {
                        set_router(&mut push, tp, SwitchPosition::Output);
                    }
                    push(
                        tp,
                        EventKind::Reflect {
                            photon: s,
                            setting: Some(1),
                            then,
                        },
                    );
                    if pass < 2 {
                        push(tp, EventKind::EnterDelay2 { photon: s });
                    } else {
                        push(tp, EventKind::Emit { photon: s });
                    }
                }
            } else {
                let k = (j - s + 1) as u32;
                set_router(&mut push, t, SwitchPosition::Delay1);
                push(
                    t,
                    EventKind::Reflect {
                        photon: j,
                        setting: (k <= cutoff).then_some(k),
                        then: HadamardAnnotation::None,
                    },
                );
                push(t, EventKind::EnterDelay1 { photon: j });
            }
        }
    }
    events.sort_by(|a, b| a.time_ns.total_cmp(&b.time_ns));
    Ok(Timeline {
        config: *cfg,
        cutoff,
        events,
    })
}

/// Maps reflections and their Hadamard annotations to gates, in time order.
pub fn timeline_to_program(timeline: &Timeline) -> Result<CircuitProgram> {
    let gates = timeline.timed_gates().into_iter().map(|(_, g)| g).collect();
    CircuitProgram::new(timeline.config.photons, timeline.cutoff, gates)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    OutOfOrder {
        index: usize,
    },
    CavityOverlap {
        time_ns: f64,
        photons: (usize, usize),
    },
    DelayMismatch {
        photon: usize,
        line: u8,
        expected_ns: f64,
        actual_ns: f64,
    },
    DanglingDelay {
        photon: usize,
    },
    NonIncreasingReflections {
        photon: usize,
    },
    MissingInjection {
        photon: usize,
    },
    EmissionCount {
        photon: usize,
        count: usize,
    },
    EventAfterEmission {
        photon: usize,
    },
    EmissionOrder {
        photon: usize,
    },
    Routing {
        index: usize,
        expected: SwitchPosition,
        actual: Option<SwitchPosition>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelineReport {
    pub violations: Vec<Violation>,
    pub makespan_ns: f64,
    pub makespan_cycles: f64,
    /// Phase-carrying reflections per photon (index 0 unused).
    pub reflect_counts: Vec<usize>,
    /// Reflections per `CR_k` setting (index 0 unused).
    pub cr_counts: Vec<usize>,
    pub atom_hadamards: usize,
    /// Operation cycles from the first to the last reflection, inclusive.
    pub span_cycles: usize,
    /// Cycles in that span with a photon at the cavity.
    pub busy_cycles: usize,
    /// Cycles in that span with no photon at the cavity.
    pub idle_cycles: usize,
}

impl TimelineReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks cavity exclusivity, delay-line timing, routing and emission order
/// and tallies the quantities the error budget counts.
pub fn validate_timeline(timeline: &Timeline) -> TimelineReport {
    let cfg = &timeline.config;
    let n = cfg.photons;
    let eps = TIME_EPS * cfg.t_cycle_ns.max(1.0);
    let events = &timeline.events;
    let mut violations = Vec::new();

    for (i, w) in events.windows(2).enumerate() {
        if w[1].time_ns < w[0].time_ns {
            violations.push(Violation::OutOfOrder { index: i + 1 });
        }
    }

    let reflects: Vec<(f64, usize)> = events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::Reflect { photon, .. } => Some((e.time_ns, photon)),
            _ => None,
        })
        .collect();
    let mut sorted = reflects.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if (w[1].0 - w[0].0).abs() < eps {
            violations.push(Violation::CavityOverlap {
                time_ns: w[0].0,
                photons: (w[0].1, w[1].1),
            });
        }
    }

    // Per-photon causal chains and switch routing.
    let mut input = None;
    let mut router = None;
    let mut pending_delay: Vec<Option<(u8, f64)>> = vec![None; n + 1];
    let mut injected = vec![false; n + 1];
    let mut visited = vec![false; n + 1];
    let mut last_reflect = vec![f64::NEG_INFINITY; n + 1];
    let mut emitted_at: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    let mut reflect_counts = vec![0; n + 1];
    let mut cr_counts = vec![0; timeline.cutoff as usize + 1];
    let mut atom_hadamards = 0;

    let expect_router = |index: usize,
                         want: SwitchPosition,
                         router: Option<SwitchPosition>,
                         v: &mut Vec<Violation>| {
        if router != Some(want) {
            v.push(Violation::Routing {
                index,
                expected: want,
                actual: router,
            });
        }
    };

    for (index, ev) in events.iter().enumerate() {
        if let Some(p) = ev.kind.photon() {
            if p == 0 || p > n {
                continue;
            }
            if !emitted_at[p].is_empty() {
                violations.push(Violation::EventAfterEmission { photon: p });
            }
        }
        match ev.kind {
            EventKind::SwitchSet { switch, position } => match switch {
                SwitchId::Input => input = Some(position),
                SwitchId::Router => router = Some(position),
            },
            EventKind::Inject { photon } => injected[photon] = true,
            EventKind::Reflect {
                photon,
                setting,
                then,
            } => {
                if !injected[photon] {
                    violations.push(Violation::MissingInjection { photon });
                }
                match pending_delay[photon].take() {
                    Some((line, entered)) => {
                        let tau = if line == 1 { cfg.tau1_ns } else { cfg.tau2_ns };
                        if (ev.time_ns - (entered + tau)).abs() > eps {
                            violations.push(Violation::DelayMismatch {
                                photon,
                                line,
                                expected_ns: entered + tau,
                                actual_ns: ev.time_ns,
                            });
                        }
                        if line == 1 && input != Some(SwitchPosition::Feedback) {
                            violations.push(Violation::Routing {
                                index,
                                expected: SwitchPosition::Feedback,
                                actual: input,
                            });
                        }
                    }
                    None if visited[photon] => {
                        violations.push(Violation::NonIncreasingReflections { photon })
                    }
                    None => {
                        if input != Some(SwitchPosition::Source) {
                            violations.push(Violation::Routing {
                                index,
                                expected: SwitchPosition::Source,
                                actual: input,
                            });
                        }
                    }
                }
                if ev.time_ns <= last_reflect[photon] {
                    violations.push(Violation::NonIncreasingReflections { photon });
                }
                last_reflect[photon] = ev.time_ns;
                visited[photon] = true;
                if let Some(k) = setting {
                    reflect_counts[photon] += 1;
                    if let Some(c) = cr_counts.get_mut(k as usize) {
                        *c += 1;
                    }
                }
                if then == HadamardAnnotation::Pair {
                    atom_hadamards += 1;
                }
            }
            EventKind::EnterDelay1 { photon } => {
                expect_router(index, SwitchPosition::Delay1, router, &mut violations);
                pending_delay[photon] = Some((1, ev.time_ns));
            }
            EventKind::EnterDelay2 { photon } => {
                expect_router(index, SwitchPosition::Delay2, router, &mut violations);
                pending_delay[photon] = Some((2, ev.time_ns));
            }
            EventKind::Emit { photon } => {
                expect_router(index, SwitchPosition::Output, router, &mut violations);
                emitted_at[photon].push(ev.time_ns);
            }
        }
    }

    for p in 1..=n {
        if pending_delay[p].is_some() {
            violations.push(Violation::DanglingDelay { photon: p });
        }
        if emitted_at[p].len() != 1 {
            violations.push(Violation::EmissionCount {
                photon: p,
                count: emitted_at[p].len(),
            });
        }
    }
    for p in 1..n {
        if let (Some(a), Some(b)) = (emitted_at[p].first(), emitted_at[p + 1].first()) {
            if a >= b {
                violations.push(Violation::EmissionOrder { photon: p });
            }
        }
    }

    let makespan_ns = match (events.first(), events.last()) {
        (Some(a), Some(b)) => b.time_ns - a.time_ns,
        _ => 0.0,
    };
    let slots: BTreeSet<i64> = reflects
        .iter()
        .map(|(t, _)| (t / cfg.t_cycle_ns + TIME_EPS).floor() as i64)
        .collect();
    let span_cycles = match (slots.first(), slots.last()) {
        (Some(a), Some(b)) => (b - a + 1) as usize,
        _ => 0,
    };
    let busy_cycles = slots.len();

    TimelineReport {
        violations,
        makespan_ns,
        makespan_cycles: makespan_ns / cfg.t_cycle_ns,
        reflect_counts,
        cr_counts,
        atom_hadamards,
        span_cycles,
        busy_cycles,
        idle_cycles: span_cycles - busy_cycles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn timeline(n: usize, k: u32) -> Timeline {
        compile_timeline(&TimingConfig::with_defaults(n, 5.0).unwrap(), k).unwrap()
    }

    fn count(t: &Timeline, f: impl Fn(&EventKind) -> bool) -> usize {
        t.events.iter().filter(|e| f(&e.kind)).count()
    }

    #[test]
    fn timing_invariants() {
        assert!(TimingConfig::new(3, 5.0, 15.0, 0.1).is_err());
        assert!(TimingConfig::new(3, 5.0, 15.1, 0.5).is_err());
        assert!(TimingConfig::new(3, 5.0, 15.1, 0.49).is_ok());
        assert!(TimingConfig::new(0, 5.0, 15.1, 0.1).is_err());
        assert!(TimingConfig::new(3, 0.0, 15.1, 0.1).is_err());
        let d = TimingConfig::with_defaults(4, 5.0).unwrap();
        assert_eq!((d.tau1_ns, d.tau2_ns), (25.0, 0.25));
    }

    #[test]
    fn single_photon_schedule() {
        let t = timeline(1, 1);
        assert_eq!(count(&t, |k| matches!(k, EventKind::Reflect { .. })), 3);
        assert_eq!(count(&t, |k| matches!(k, EventKind::Emit { .. })), 1);
        assert_eq!(count(&t, |k| matches!(k, EventKind::EnterDelay1 { .. })), 0);
        assert!(validate_timeline(&t).is_valid());
    }

    #[test]
    fn three_photon_counts() {
        let t = timeline(3, 3);
        assert_eq!(count(&t, |k| matches!(k, EventKind::Reflect { .. })), 12);
        assert_eq!(
            count(&t, |k| matches!(k, EventKind::EnterDelay1 { photon: 3 })),
            2
        );
        let r = validate_timeline(&t);
        assert!(r.is_valid(), "{:?}", r.violations);
        assert_eq!(r.reflect_counts, vec![0, 3, 4, 5]);
        assert_eq!(r.cr_counts, vec![0, 9, 2, 1]);
        assert_eq!(r.atom_hadamards, 6);
        assert_eq!((r.span_cycles, r.busy_cycles, r.idle_cycles), (11, 6, 5));
    }

    #[test]
    fn truncated_reflections_pass_without_phase() {
        let t = timeline(4, 2);
        let passes = count(&t, |k| {
            matches!(k, EventKind::Reflect { setting: None, .. })
        });
        // CR_3 twice and CR_4 once are dropped
        assert_eq!(passes, 3);
        let r = validate_timeline(&t);
        assert!(r.is_valid());
        assert_eq!(r.reflect_counts, vec![0, 3, 4, 4, 4]);
    }

    #[test]
    fn single_photon_program_is_swap_sequence() {
        let p = timeline_to_program(&timeline(1, 1)).unwrap();
        assert_eq!(p, crate::circuit::build_qft_program(1, 1).unwrap());
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn program_matches_gate_sequence() {
        for n in 1..=7 {
            for k in 1..=n as u32 {
                let p = timeline_to_program(&timeline(n, k)).unwrap();
                assert_eq!(
                    p,
                    crate::circuit::build_qft_program(n, k).unwrap(),
                    "n={n} K={k}"
                );
            }
        }
    }

    #[test]
    fn empty_timeline_gives_empty_program() {
        let mut t = timeline(2, 2);
        t.events.clear();
        assert!(timeline_to_program(&t).unwrap().is_empty());
    }

    #[test]
    fn simultaneous_reflections_flagged() {
        let mut t = timeline(2, 2);
        let extra = TimelineEvent {
            time_ns: 0.0,
            kind: EventKind::Reflect {
                photon: 2,
                setting: Some(2),
                then: HadamardAnnotation::None,
            },
        };
        t.events.insert(3, extra);
        let r = validate_timeline(&t);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CavityOverlap { .. })));
    }

    #[test]
    fn delay_mismatch_flagged() {
        let mut t = timeline(2, 2);
        let cfg = TimingConfig {
            tau1_ns: t.config.tau1_ns + 1.0,
            ..t.config
        };
        t.config = cfg;
        let r = validate_timeline(&t);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DelayMismatch { line: 1, .. })));
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        timeline(1, 1).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "time_ns,event_kind,photon,parameter");
        assert_eq!(lines[1], "0.00000000000e0,switch,,input:source");
        assert!(lines.contains(&"2.50000000000e-1,reflect,1,CR1+Hap"));
        assert!(lines.contains(&"5.00000000000e-1,reflect,1,CR1+Hp"));
        assert_eq!(*lines.last().unwrap(), "5.00000000000e-1,emit,1,");
    }
}
