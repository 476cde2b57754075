use thiserror::Error;

/// Why a list of integers is not a distinct-parts partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    /// A part smaller than 1 at the given position.
    NonPositive { index: usize, value: i64 },
    /// The same part appears twice.
    Repeated { value: i64 },
    /// Parts are not listed in decreasing order.
    OutOfOrder { index: usize },
    /// A part does not fit in the part representation.
    TooLarge { value: i64 },
}

impl std::fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartitionDefect::NonPositive { index, value } => {
                write!(f, "non-positive part {value} at position {index}")
            }
            PartitionDefect::Repeated { value } => write!(f, "repeated part {value}"),
            PartitionDefect::OutOfOrder { index } => {
                write!(f, "parts out of order at position {index} (must be strictly decreasing)")
            }
            PartitionDefect::TooLarge { value } => write!(f, "part {value} is too large"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(PartitionDefect),

    #[error("partition size must be at least 1")]
    ZeroSize,

    #[error("part {part} exceeds the partition size {n}")]
    PartExceedsSize { part: u32, n: u64 },

    #[error("{what}: n = {n} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: u64, cap: u64 },

    #[error("rank {rank} out of range: there are only {count} partitions of {n}")]
    RankOutOfRange { n: u64, rank: String, count: String },

    #[error("rejection budget exhausted after {attempts} attempts without hitting size {n}")]
    BudgetExhausted { n: u64, attempts: u64 },

    #[error("n = {n} is too small (need n >= {min})")]
    SizeTooSmall { n: u64, min: u64 },

    #[error("small-part range k_n = {k_n} is too large for sign enumeration (max {max})")]
    SmallRangeTooLarge { k_n: u64, max: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical procedure did not converge: {0}")]
    NonConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
