//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the numerical core, the generators and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is singular or numerically rank-deficient (sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e})")]
    SingularMatrix { sigma_min: f64, sigma_max: f64 },

    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorCountMismatch { left: u32, right: u32 },

    #[error("blade mask {mask:#x} out of range for {m} generators")]
    InvalidBlade { mask: u64, m: u32 },

    #[error("materialization capacity exceeded: required {required}, limit {limit}")]
    CapacityExceeded { required: usize, limit: usize },

    #[error(
        "tuple is not commuting: max commutator norm {defect:e} exceeds threshold {threshold:e}"
    )]
    NotCommuting { defect: f64, threshold: f64 },

    #[error("matrix {index} is not normal: defect {defect:e} exceeds threshold {threshold:e}")]
    NotNormal {
        index: usize,
        defect: f64,
        threshold: f64,
    },

    #[error("tuple is not simultaneously diagonalizable within tolerance")]
    NotDiagonalizable,

    #[error("simultaneous diagonalization failed after exhausting retries")]
    DiagonalizationFailed,

    #[error("common triangularization failed after exhausting retries")]
    TriangularizationFailed,

    #[error("spectrum kind mismatch: overlap matrices require unitary-kind spectra")]
    KindMismatch,

    #[error("matrix is not doubly stochastic: max row/column sum deviation {deviation:e}")]
    NotDoublyStochastic { deviation: f64 },

    #[error("no perfect matching on the positive support; tolerance failure")]
    MatchingNotFound,

    #[error("joint eigenvalue at row {row}, coordinate {coord} is zero or below the singularity threshold")]
    ZeroEigenvalue { row: usize, coord: usize },

    #[error("diagonal entries are not ordered decreasingly nonnegative")]
    NotOrdered,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("LAPACK routine {routine} failed with info = {info}")]
    Factorization { routine: &'static str, info: i32 },

    #[error("malformed tuple file: {0}")]
    FileFormat(String),

    #[error("unsupported schema version {found:?}, expected {expected:?}")]
    SchemaVersion { found: String, expected: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    fn dimension_mismatch(context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
        }
    }

    pub(crate) fn dims(context: impl Into<String>) -> Self {
        Self::dimension_mismatch(context)
    }
}
