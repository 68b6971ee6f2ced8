use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty metric space")]
    EmptySpace,

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("exact search limit exceeded: {size} points, limit {limit}")]
    ExactSearchLimit { size: usize, limit: usize },

    #[error("point {index} is not in the metric space (size {size})")]
    PointNotInSpace { index: usize, size: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not unitary: |U^dag U - 1| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not skew-Hermitian: |X + X^dag| = {deviation:.3e}")]
    NotSkewHermitian { deviation: f64 },

    #[error("matrix is not Hermitian: |A - A^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("not a projector: {0}")]
    NotProjector(String),

    #[error("basis columns are not orthonormal: |B^dag B - 1| = {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dense dimension limit exceeded: {dim} > {limit}")]
    DenseLimit { dim: usize, limit: usize },

    #[error("net too large: projected {projected} elements exceeds limit {limit}")]
    NetTooLarge { projected: u64, limit: u64 },

    #[error("Kato precondition violated: |P - Q| = {distance:.6} > 1/sqrt(2)")]
    KatoPrecondition { distance: f64 },

    #[error("matrix is numerically singular (smallest eigenvalue {min_eigenvalue:.3e})")]
    Singular { min_eigenvalue: f64 },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("Trotter bound violated: measured {measured:.6e} > bound {bound:.6e}")]
    TrotterBoundViolated { measured: f64, bound: f64 },

    #[error("epsilon {epsilon} outside validity range: {requirement}")]
    OutOfValidity { epsilon: f64, requirement: String },

    #[error("vacuous lower bound at epsilon {epsilon}: requires epsilon < {threshold}")]
    VacuousLowerBound { epsilon: f64, threshold: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
