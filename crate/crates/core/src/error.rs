use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register needs at least one subsystem")]
    EmptyRegister,
    #[error("subsystem dimension {0} is below 2")]
    SubsystemTooSmall(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("target subsystem {0} listed more than once")]
    RepeatedTarget(usize),
    #[error("target subsystem {index} out of range for a {len}-subsystem register")]
    TargetOutOfRange { index: usize, len: usize },
    #[error("operator is not hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("operator is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("operator must be tagged hermitian")]
    HermitianTagRequired,
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("angular frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("time-slice count must be positive")]
    ZeroSteps,
    #[error("Fourier component {0} is not the adjoint of component {neg}", neg = -.0)]
    NonHermitianSeries(i32),
    #[error("expected {expected} parameters, got {actual}")]
    ParameterCount { expected: usize, actual: usize },
    #[error("no exact two-term shift rule for parameter {0}")]
    ShiftRuleUnavailable(usize),
    #[error("phase {0} outside [0, 1)")]
    PhaseOutOfRange(f64),
    #[error("the variational Hamiltonian ansatz is only defined for j_max = 1, got {0}")]
    UnsupportedTruncation(usize),
    #[error("register shape mismatch")]
    ShapeMismatch,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
