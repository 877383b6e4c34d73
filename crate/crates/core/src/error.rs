use thiserror::Error;

/// Errors raised by the matrix kernels and channel constructions.
///
/// Residuals are reported as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QchanError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: defect {defect:e} exceeds {tol:e}")]
    NonHermitianInput { defect: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("basis is rank deficient: smallest singular value {sigma_min:e} vs largest {sigma_max:e}")]
    RankDeficientBasis { sigma_min: f64, sigma_max: f64 },
    #[error("input contains non-finite entries")]
    NonFinite,
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: String },
    #[error("Kraus set is not complete: ||sum K^dag K - I||_F = {defect:e}")]
    IncompleteKrausSet { defect: f64 },
    #[error("Kraus set is empty")]
    EmptyKrausSet,
    #[error("matrix is not an orthogonal projector: defect {defect:e}")]
    NotAProjector { defect: f64 },
    #[error("matrix is not unitary: defect {defect:e}")]
    NonUnitary { defect: f64 },
    #[error("negative eigenvalue {value:e} below tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("operator is not in the span of the basis: residual {residual:e}")]
    ExpansionResidual { residual: f64 },
    #[error("syndrome projector {index} is defective: ||P_k^2 - P_k||_F = {defect:e}")]
    ProjectorDefect { index: usize, defect: f64 },
    #[error("state has zero trace after recovery")]
    ZeroTrace,
    #[error("input state is not pure: purity defect {defect:e}")]
    NonPureInput { defect: f64 },
    #[error("invalid density matrix: {reason}")]
    InvalidDensity { reason: String },
    #[error("invalid state vector: {reason}")]
    InvalidState { reason: String },
    #[error("dimension {n} exceeds the explicit-construction cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid sign-index vector {indices:?} for dimension {n}")]
    InvalidSignVector { indices: Vec<usize>, n: usize },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = QchanError> = std::result::Result<T, E>;

pub(crate) fn dim_mismatch(expected: impl ToString, found: impl ToString) -> QchanError {
    QchanError::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
