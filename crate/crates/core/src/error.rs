use thiserror::Error;

/// Errors raised by the library. The CLI maps the variants onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid element id {id} for a group of order {order}")]
    InvalidElement { id: u32, order: usize },

    #[error("hypothesis (H) violated: {0}")]
    Hypothesis(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("profile rejected: {0}")]
    Profile(String),

    #[error("schedule: {0}")]
    Schedule(String),

    #[error("level {0} has no finite k_m")]
    InfiniteLevel(usize),

    #[error("elements belong to different diagonal products (depth {left} vs {right})")]
    ScheduleMismatch { left: usize, right: usize },

    #[error("materialization cap exceeded: {what} has {size} elements, cap is {cap}")]
    CapExceeded { what: String, size: String, cap: u64 },

    #[error("address index {index} out of range at level {level} (size {size})")]
    AddressOutOfRange { level: usize, index: u64, size: u64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
