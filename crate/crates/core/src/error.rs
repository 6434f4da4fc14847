use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bound exceeded: {what} (limit {limit})")]
    BoundExceeded { what: String, limit: usize },

    #[error("dense set #{index} has no member below the current condition within the search bound")]
    NotDense { index: usize },

    #[error("malformed condition: {0}")]
    MalformedCondition(String),

    #[error("block #{index} is empty and does not start at position 0, so it cannot be coded")]
    EmptyBlock { index: usize },

    #[error("target condition does not extend the image of the source condition")]
    NotBelow,

    #[error("length {len} is not a multiple of the block size {block}")]
    LengthNotMultiple { len: usize, block: usize },

    #[error("invalid dictionary: {0}")]
    InvalidDictionary(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("the upward closure is not a filter: {0}")]
    NotAFilter(String),

    #[error("stage {stage} missed dense set #{dense_index}")]
    StageFailure { stage: usize, dense_index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn bound(what: impl Into<String>, limit: usize) -> Self {
        Error::BoundExceeded {
            what: what.into(),
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
