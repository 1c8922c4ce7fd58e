use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("cooperativity {0} must exceed 1 to build an operating point")]
    DegenerateCooperativity(f64),

    #[error("no Stark shift in [0, {max_ghz}] GHz realises CR_{k}")]
    OutOfRange { k: u32, max_ghz: f64 },

    #[error("arity mismatch: expected {expected} photons, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("{qubits} qubits exceeds the {cap}-qubit cap of the {kind} simulator")]
    CapExceeded {
        kind: &'static str,
        qubits: usize,
        cap: usize,
    },

    #[error("post-selection weight vanished")]
    ZeroWeight,

    #[error("measurement operator has zero largest eigenvalue")]
    DegenerateOperator,

    #[error("invalid timing: {0}")]
    InvalidTiming(String),

    #[error("trace distance {observed} exceeds budget {bound} ({context})")]
    BoundViolation {
        observed: f64,
        bound: f64,
        context: String,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
