use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An occupation would exceed the per-mode cutoff of `mode`.
    CutoffViolation { mode: String, occupation: usize, cutoff: usize },
    UnknownMode(String),
    DuplicateMode(String),
    /// Two states or ensembles were built on different registries.
    RegistryMismatch,
    /// `tensor` was asked to join registries sharing a label.
    OverlappingModes(String),
    InvalidParameter(String),
    /// A target state for fidelity is not unit norm.
    NotNormalized(f64),
    /// The dense oracle refuses Hilbert spaces above its dimension limit.
    DimensionOverflow { dim: usize, limit: usize },
    /// The scenario cannot be run with the requested sources/flags.
    ScenarioMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CutoffViolation { mode, occupation, cutoff } => write!(
                f,
                "cutoff violation on mode {mode}: occupation {occupation} exceeds n_max {cutoff}"
            ),
            Error::UnknownMode(m) => write!(f, "unknown mode {m}"),
            Error::DuplicateMode(m) => write!(f, "duplicate mode label {m}"),
            Error::RegistryMismatch => write!(f, "states live on different mode registries"),
            Error::OverlappingModes(m) => write!(f, "mode {m} appears in both tensor factors"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NotNormalized(n) => write!(f, "target state has norm^2 {n}, expected 1"),
            Error::DimensionOverflow { dim, limit } => {
                write!(f, "dense dimension {dim} exceeds limit {limit}")
            }
            Error::ScenarioMismatch(msg) => write!(f, "scenario mismatch: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
