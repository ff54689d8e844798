use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("allocation has {found} entries but the problem has {expected} subsystems")]
    LengthMismatch { expected: usize, found: usize },

    #[error("allocation entry {index} is {value}; every subsystem needs at least one component")]
    InvalidAllocation { index: usize, value: u32 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dynamic program needs {states} states, above the cap of {cap}")]
    StateCapExceeded { states: u128, cap: u128 },

    #[error("exhaustive search box holds {size} allocations, above the cap of {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },

    #[error("failed to parse problem: {0}")]
    Parse(String),
}
