use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    #[error("expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("factor dimensions {dims:?} do not multiply to {dim}")]
    FactorDims { dims: Vec<usize>, dim: usize },

    #[error("factor index {index} out of range for {factors} factors")]
    FactorIndex { index: usize, factors: usize },

    #[error("partial trace needs a nonempty set of kept factors")]
    EmptyKeep,

    #[error("operator dimension {op} does not match subsystem dimension {sub}")]
    OperatorDim { op: usize, sub: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ChannelError {
    #[error("`{field}` must be {requirement}, got {value}")]
    InvalidParameter { field: &'static str, requirement: &'static str, value: f64 },

    #[error("environment state is not diagonal in the computational basis (off-diagonal {0:.3e})")]
    NonDiagonalEnvironment(f64),

    #[error("unsupported ancilla dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EstimationError {
    #[error("derivative has weight {0:.3e} on the kernel of the state (leaves the support)")]
    SupportLeak(f64),

    #[error(
        "finite-difference derivative for parameter {param} not converged: halving the step changed it by {change:.3e} (tolerance {tolerance:.3e})"
    )]
    Richardson { param: usize, change: f64, tolerance: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("degenerate thermal benchmark (trace {trace:.3e}, determinant {det:.3e})")]
    DegenerateBenchmark { trace: f64, det: f64 },

    #[error("singularity test needs a qubit state with two parameters, got dimension {dim} and {params} parameters")]
    NotBiparametrizedQubit { dim: usize, params: usize },

    #[error("parameter count mismatch: {0} vs {1}")]
    ParameterCount(usize, usize),

    #[error(transparent)]
    Channel(#[from] ChannelError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ProtocolError {
    #[error("invalid configuration `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("joint Hilbert-space dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error(transparent)]
    Channel(#[from] ChannelError),

    #[error(transparent)]
    Estimation(#[from] EstimationError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl ProtocolError {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::InvalidConfig { field: field.into(), reason: reason.into() }
    }

    /// Configuration problems as opposed to numerical failures.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Self::InvalidConfig { .. } | Self::DimensionCap { .. })
            || matches!(self, Self::Channel(ChannelError::InvalidParameter { .. }))
    }
}
