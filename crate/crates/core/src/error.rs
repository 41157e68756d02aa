use thiserror::Error;

use crate::qcore::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis mismatch: {0:?} vs {1:?}")]
    BasisMismatch(Basis, Basis),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("degenerate decomposition: {0}")]
    DegenerateDecomposition(String),

    #[error("equal eigenvalues: use the degenerate decomposition family")]
    EqualEigenvalues,

    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),

    #[error("infeasible geometry: tan(x)·tan(α−x)·sin²φ′ = {value} must lie in [0, 1]")]
    InfeasibleGeometry { value: f64 },

    #[error("η{index} is undefined: q_s{index} = {q}")]
    UndefinedEta { index: u8, q: f64 },

    #[error("probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        }
    }
}
