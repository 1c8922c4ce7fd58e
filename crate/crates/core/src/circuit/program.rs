use std::fmt;

use serde::{Deserialize, Serialize};

use super::QubitRef;
use crate::error::{Error, Result};

/// One instruction of a circuit program. The atom is implicit in every
/// two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    HadamardAtom,
    HadamardPhoton(usize),
    /// `H_a ⊗ H_p` on the atom and photon `j`.
    HadamardPair(usize),
    /// `CR_k` between the atom and a photon: `diag(1, 1, 1, e^{i2π/2^k})`.
    ControlledPhase {
        k: u32,
        photon: usize,
    },
    /// Ideal atom-photon SWAP.
    Swap(usize),
    /// `diag(1, e^{i·angle})` on a photon.
    PhaseFix {
        photon: usize,
        angle: f64,
    },
}

impl GateOp {
    /// Photon touched by this gate, if any.
    pub fn photon(&self) -> Option<usize> {
        match *self {
            GateOp::HadamardAtom => None,
            GateOp::HadamardPhoton(j)
            | GateOp::HadamardPair(j)
            | GateOp::Swap(j)
            | GateOp::ControlledPhase { photon: j, .. }
            | GateOp::PhaseFix { photon: j, .. } => Some(j),
        }
    }

    pub fn acts_on_atom(&self) -> bool {
        !matches!(self, GateOp::HadamardPhoton(_) | GateOp::PhaseFix { .. })
    }

    fn parse(line: &str, lineno: usize) -> Result<Self> {
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let photon = |tok: &str| -> Result<usize> {
            tok.strip_prefix('p')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&j| j >= 1)
                .ok_or_else(|| err(format!("expected photon reference like p3, got {tok:?}")))
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["H", "a"] => Ok(GateOp::HadamardAtom),
            ["H", "a", p] => Ok(GateOp::HadamardPair(photon(p)?)),
            ["H", p] => Ok(GateOp::HadamardPhoton(photon(p)?)),
            ["CR", k, p] => {
                let k = k
                    .parse::<u32>()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| err(format!("bad CR order {k:?}")))?;
                Ok(GateOp::ControlledPhase {
                    k,
                    photon: photon(p)?,
                })
            }
            ["SWAP", p] => Ok(GateOp::Swap(photon(p)?)),
            ["PHASEFIX", angle, p] => {
                let angle = angle
                    .parse::<f64>()
                    .ok()
                    .filter(|a| a.is_finite())
                    .ok_or_else(|| err(format!("bad angle {angle:?}")))?;
                Ok(GateOp::PhaseFix {
                    photon: photon(p)?,
                    angle,
                })
            }
            _ => Err(err(format!("unrecognised gate {line:?}"))),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateOp::HadamardAtom => write!(f, "H a"),
            GateOp::HadamardPhoton(j) => write!(f, "H {}", QubitRef::Photon(j)),
            GateOp::HadamardPair(j) => write!(f, "H a {}", QubitRef::Photon(j)),
            GateOp::ControlledPhase { k, photon } => {
                write!(f, "CR {k} {}", QubitRef::Photon(photon))
            }
            GateOp::Swap(j) => write!(f, "SWAP {}", QubitRef::Photon(j)),
            GateOp::PhaseFix { photon, angle } => {
                write!(f, "PHASEFIX {angle} {}", QubitRef::Photon(photon))
            }
        }
    }
}

/// An ordered gate list over `arity` photons plus the atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitProgram {
    arity: usize,
    cutoff: u32,
    gates: Vec<GateOp>,
}

impl CircuitProgram {
    pub fn new(arity: usize, cutoff: u32, gates: Vec<GateOp>) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidParams("cutoff K must be at least 1".into()));
        }
        for g in &gates {
            if let Some(j) = g.photon() {
                if j == 0 || j > arity {
                    return Err(Error::ArityMismatch {
                        expected: arity,
                        actual: j,
                    });
                }
            }
            if let GateOp::ControlledPhase { k, .. } = *g {
                if k == 0 || k > cutoff {
                    return Err(Error::InvalidParams(format!("CR_{k} outside 1..={cutoff}")));
                }
            }
        }
        Ok(Self {
            arity,
            cutoff,
            gates,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of `CR_k` gates for each `k`, indexed by `k`.
    pub fn cr_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cutoff as usize + 1];
        for g in &self.gates {
            if let GateOp::ControlledPhase { k, .. } = *g {
                counts[k as usize] += 1;
            }
        }
        counts
    }

    /// Line-oriented text: a `# arity N cutoff K` header, then one gate per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("# arity {} cutoff {}\n", self.arity, self.cutoff);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses [`to_text`](Self::to_text) output. Without a header the arity
    /// is the largest photon index used and the cutoff the largest `k`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut header: Option<(usize, u32)> = None;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let toks: Vec<&str> = comment.split_whitespace().collect();
                if let ["arity", n, "cutoff", k] = toks.as_slice() {
                    let parsed = n.parse().ok().zip(k.parse().ok());
                    header = Some(parsed.ok_or_else(|| Error::Parse {
                        line: i + 1,
                        message: format!("bad header {line:?}"),
                    })?);
                }
                continue;
            }
            gates.push(GateOp::parse(line, i + 1)?);
        }
        let (arity, cutoff) = header.unwrap_or_else(|| {
            let arity = gates.iter().filter_map(GateOp::photon).max().unwrap_or(0);
            let cutoff = gates
                .iter()
                .filter_map(|g| match g {
                    GateOp::ControlledPhase { k, .. } => Some(*k),
                    _ => None,
                })
                .max()
                .unwrap_or(1);
            (arity, cutoff)
        });
        Self::new(arity, cutoff, gates)
    }
}

/// Atom ↔ photon `j` SWAP from three `CR_1` reflections, in time order:
/// `CR₁, H_{a,p}, CR₁, H_{a,p}, CR₁, H_{a,p}`.
pub fn swap_from_cr1(j: usize) -> Vec<GateOp> {
    let cr1 = GateOp::ControlledPhase { k: 1, photon: j };
    vec![
        cr1,
        GateOp::HadamardPair(j),
        cr1,
        GateOp::HadamardPair(j),
        cr1,
        GateOp::HadamardPair(j),
    ]
}

/// SWAP with photon `j` followed by the QFT Hadamard on the atom. The final
/// `H_a` of the swap cancels against it, leaving only the photon Hadamard.
fn swap_then_atom_hadamard(j: usize) -> Vec<GateOp> {
    let mut gates = swap_from_cr1(j);
    *gates.last_mut().expect("swap sequence is non-empty") = GateOp::HadamardPhoton(j);
    gates
}

/// The `n`-photon streaming QFT with `CR_k` gates above `cutoff` dropped.
///
/// Subroutine `i` swaps photon `i` with the atom, applies the atom Hadamard
/// and then `CR_{j−i+1}` to every later photon `j`. Photon 1 leaves carrying
/// the atom's initial state; see [`output_wire`](super::output_wire) for where
/// each output qubit ends up.
pub fn build_qft_program(n: usize, cutoff: u32) -> Result<CircuitProgram> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "the QFT needs at least one photon".into(),
        ));
    }
    let mut gates = Vec::new();
    for i in 1..=n {
        gates.extend(swap_then_atom_hadamard(i));
        for j in i + 1..=n {
            let k = (j - i + 1) as u32;
            if k <= cutoff {
                gates.push(GateOp::ControlledPhase { k, photon: j });
            }
        }
    }
    CircuitProgram::new(n, cutoff, gates)
}
