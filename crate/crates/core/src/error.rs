use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group order {order} exceeds the configured cap of {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("invalid metacyclic parameters: {0}")]
    InvalidMetacyclic(String),

    #[error("invalid weight set: {0}")]
    InvalidWeights(String),

    #[error("parse error at position {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },

    #[error("group is not abelian: {0}")]
    NonAbelian(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("search budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            expected: expected.into(),
            found: found.into(),
        }
    }
}
