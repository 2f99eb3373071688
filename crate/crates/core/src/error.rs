use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ‖M − M†‖∞ = {deviation:e} exceeds {tolerance:e}")]
    NonHermitian { deviation: f64, tolerance: f64 },

    #[error("negative eigenvalue {min_eigenvalue:e} below the PSD floor")]
    NegativeEigenvalue { min_eigenvalue: f64 },

    #[error("invalid order {0}")]
    InvalidOrder(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    StateInvalid(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("map is not completely positive and trace preserving: {0}")]
    NotCptp(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("operator in separable decomposition is not PSD: {0}")]
    NotSeparableInput(String),

    #[error("optimizer budget exhausted: best value {value} with gap estimate {gap_estimate:e}")]
    BudgetExhausted { value: f64, gap_estimate: f64 },

    #[error("channel is not entanglement breaking and the protocol is not flagged separable-inputs")]
    NotEntanglementBreaking,

    #[error("joint dimension {dim} exceeds the simulation cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(msg: impl Into<String>) -> Error {
    Error::DimensionMismatch(msg.into())
}
