use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Operations on windowed structures fail loudly instead of truncating
/// silently; precondition violations carry enough data to point at the
/// offending input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("elements belong to different ring models")]
    ModelMismatch,

    #[error("degree window too small: component of degree {degree} is not enumerable")]
    WindowTooSmall { degree: i64 },

    #[error("matrix of ranged elements has wrong shape: {0}")]
    ShapeMismatch(String),

    #[error("entry ({row}, {col}) has support outside its mandated degree range [{lo}, {hi}]")]
    RangeViolation { row: usize, col: usize, lo: i64, hi: i64 },

    #[error("levelwise maps do not commute with the differentials")]
    NotChainMap,

    #[error("complex differential does not square to zero at level {level}")]
    NotComplex { level: i64 },

    #[error("summand {index} of level {level} has k + l = {sum} < 0, complex is not in Vect0")]
    NotVect0 { level: i64, index: usize, sum: i64 },

    #[error("no partition of unity in degree {degree}: ring is not strongly graded")]
    NotStronglyGraded { degree: i64 },

    #[error("truncation window did not stabilise below the enlargement cap")]
    TruncationUnstable,

    #[error("module dimension {dim} is not an integral multiple of the simple dimension {simple} at idempotent {index}")]
    NonIntegralMultiplicity { dim: usize, simple: usize, index: usize },

    #[error("quasi-isomorphism verdicts disagree across twists of equal total degree: {0}")]
    TwistVerdictMismatch(String),

    #[error("invalid input: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
