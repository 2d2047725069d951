use crate::Key;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("stale node handle")]
    StaleHandle,
    #[error("key {0} is already present")]
    DuplicateKey(Key),
    #[error("key {0} not found")]
    KeyNotFound(Key),
    #[error("node with key {0} is not a complete knot")]
    NotCompleteKnot(Key),
    #[error("{0} requires a tree in ordinal mode")]
    ModeError(&'static str),
    #[error("ordinal {ordinal} out of range 1..={size}")]
    OutOfRange { ordinal: usize, size: usize },
    #[error("input keys not strictly ascending at index {index}")]
    NotSorted { index: usize },
    #[error("queries not sorted ascending at index {index}")]
    QueriesNotSorted { index: usize },
    #[error("query list is empty")]
    EmptyQueries,
    #[error("{0}")]
    DomainError(String),
    #[error("key {0} occurs in more than one tree")]
    DuplicateAcrossTrees(Key),
}
