use thiserror::Error;

use crate::perceptron::ConsistencyReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    BadShape { rows: usize, cols: usize, len: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("state vector is not unit norm (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("state vector must have at least one amplitude")]
    EmptyState,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("inconsistent training set: {0}")]
    InconsistentTrainingSet(ConsistencyReport),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("truth table length {0} is not a power of two")]
    BadTableLength(usize),

    #[error("placement {qubits:?} does not fit a {width}-qubit register")]
    PlacementOutOfRange { qubits: Vec<usize>, width: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("divergence detected at iteration {iteration}: mean error {error:e}")]
    DivergenceDetected { iteration: usize, error: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error{}: {message}", pair.map(|p| format!(" in pair {p}")).unwrap_or_default())]
    Validation {
        pair: Option<usize>,
        message: String,
    },
}
