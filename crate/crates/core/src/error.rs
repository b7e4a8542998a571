use thiserror::Error;

/// Errors raised by the code construction, decoders and simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is rank deficient (rank {rank}, expected {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("component codes intersect in more than {{0, 1}}")]
    IntersectionViolated,
    #[error("phase {requested} requested but segment expects phase {expected}")]
    PhaseOrder { requested: usize, expected: usize },
    #[error("too many generator rows for exhaustive enumeration: {0}")]
    TooManyRows(usize),
    #[error("segment order {0} exceeds the supported maximum")]
    OrderTooLarge(u32),
    #[error("unknown decoder '{0}'")]
    UnknownDecoder(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
