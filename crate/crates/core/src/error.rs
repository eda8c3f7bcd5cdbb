use thiserror::Error;

/// Errors produced anywhere in the core crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid number of logical qubits {n}: {reason}")]
    InvalidQubitCount { n: usize, reason: &'static str },

    #[error("unknown topology variant `{0}`")]
    UnknownVariant(String),

    #[error("site {site} out of range for a device with {n_sites} sites")]
    InvalidSite { site: usize, n_sites: usize },

    #[error("target site {0} is also listed as a control")]
    TargetIsControl(usize),

    #[error("axis ({0}, {1}, {2}) is not a unit vector")]
    AxisNotUnit(f64, f64, f64),

    #[error("rotation angle {0} outside [-2pi, 2pi]")]
    AngleOutOfRange(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("not well-formed (residual = {residual:e})")]
    NotWellFormed { residual: f64 },

    #[error("target class {0} is empty on this topology")]
    EmptyTargetClass(String),

    #[error("operation requires the baseline conveyor design")]
    BaselineRequired,

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("topology failed validation: {0}")]
    InvalidTopology(String),

    #[error("invalid model parameter: {0}")]
    InvalidModel(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

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
        Error::Io(e.to_string())
    }
}
