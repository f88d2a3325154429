use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate stable subspace: eigenvalue {re:.3e}{im:+.3e}i is on the imaginary axis")]
    DegenerateStableSubspace { re: f64, im: f64 },
    #[error("stable eigenvector block is singular (condition number {cond:.3e})")]
    SingularU { cond: f64 },
    #[error("Riccati solution is not on the physical branch: {0}")]
    UnphysicalBranch(String),
    #[error("Riccati residual {residual:.3e} above tolerance {tol:.3e}")]
    CareResidual { residual: f64, tol: f64 },
    #[error("singular linear system: {0}")]
    SingularLinearSystem(String),
    #[error("unstable dynamics: eigenvalue real part {max_re:.3e} >= 0")]
    UnstableDynamics { max_re: f64 },
    #[error("singular response at omega = {omega}")]
    SingularResponse { omega: f64 },
    #[error("exactly one monitored mode is required")]
    NoMonitoredPort,
    #[error("step size underflow at t = {t}")]
    StiffnessFailure { t: f64 },
    #[error("real part of the covariance is no longer positive definite at t = {t}")]
    PositivityLoss { t: f64 },
    #[error("top Fock level population {leakage:.3e} exceeds {limit:.3e}")]
    LeakageExceeded { leakage: f64, limit: f64 },
    #[error("Hilbert space dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("insufficient span: {0}")]
    InsufficientSpan(String),
    #[error("phase jump of {step:.3} rad at sample {index} is ambiguous")]
    PhaseUnwrapAmbiguity { index: usize, step: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("linear algebra failure: {0}")]
    LinAlg(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::LinAlg(e.to_string())
    }
}
