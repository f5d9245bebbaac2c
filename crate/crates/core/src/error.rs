use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("generator {generator} out of range for rank {rank}")]
    BadGenerator { generator: usize, rank: usize },

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error("length mismatch: expression has {expected} letters, got {found} bits")]
    LengthMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} requires a crystallographic (integral Cartan) system")]
    NotCrystallographic(&'static str),

    #[error("no subset realises the KL polynomial: degree {degree} needs {required} of {available}")]
    Infeasible {
        degree: i32,
        required: u64,
        available: usize,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
