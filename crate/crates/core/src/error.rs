use thiserror::Error;

pub type Result<T, E = CoreError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    /// `2^n` (or a derived quantity) does not fit in the 128-bit chip counter.
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("row cap of {cap} rows reached before the configuration terminated (n = {n})")]
    CapExceeded { n: u32, cap: usize },

    #[error("row index {index} is outside the top triangle 0..={n}")]
    IndexOutOfRange { n: u32, index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate segmentation for n = {n}: {reason}")]
    DegenerateSegmentation { n: u32, reason: String },

    /// An identity that must hold by construction failed; this is a bug.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("oracle move cap of {cap} reached (n = {n})")]
    MoveCapExceeded { n: u32, cap: u64 },

    #[error("n = {n} exceeds the oracle limit of {limit}")]
    OracleLimit { n: u32, limit: u32 },
}
