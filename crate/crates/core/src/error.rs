use thiserror::Error;

use crate::moves::SlideSite;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("permutations act on different point counts ({0}, {1}, {2})")]
    DegreeMismatch(usize, usize, usize),

    #[error("size {size} and order {order} give a non-integral or negative genus")]
    NonIntegralGenus { size: usize, order: usize },

    #[error("not a bitrade: {0}")]
    NotABitrade(String),

    #[error("bitrade is not separated: {coordinate} {id} splits into {cycles} cycles")]
    NotSeparated {
        coordinate: &'static str,
        id: usize,
        cycles: usize,
    },

    #[error("invalid slide site {site}")]
    InvalidSite { site: SlideSite },

    #[error("no slide contraction is possible")]
    NoParent,

    #[error("invalid bicyclic size {0}: must be even and at least 4")]
    InvalidSize(usize),

    #[error("requested size {requested} exceeds the oracle bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },

    #[error("malformed canonical code: {0}")]
    MalformedCode(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
