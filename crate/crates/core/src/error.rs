use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("expected one value per group element ({expected}), got {got}")]
    IncompleteValues { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate decomposition does not cover the space: {0}")]
    Coverage(String),
    #[error("plane frame is not orthonormal: {0}")]
    NonOrthonormalFrame(String),
    #[error("polytope kind does not match the group or coordinate view: {0}")]
    KindMismatch(String),

    #[error("unsupported problem: {0}")]
    Unsupported(String),

    #[error("wrong number of points: the problem needs {expected}, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("part {part} is empty (weight {weight:e})")]
    EmptyPart { part: String, weight: f64 },
    #[error("class barycenters do not vanish (worst {worst:e}); the map is not equivariant")]
    PreconditionFailed { worst: f64 },
    #[error("solver failed: {0}")]
    SolverFailed(String),
    #[error("degenerate zero: leading coefficient {leading:e} after {attempts} attempt(s); input looks non-generic")]
    Degenerate { leading: f64, attempts: usize },
    #[error("certificate residual {residual:e} exceeds the kill tolerance")]
    InvalidCertificate { residual: f64 },
    #[error("side condition violated: {0}")]
    ConstraintViolated(String),

    #[error("enumeration bound exceeded: {0}")]
    EnumerationBound(String),

    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
