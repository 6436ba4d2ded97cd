use thiserror::Error;

use crate::formulas::FormulaDomainError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    InvalidAlphabet(usize),

    #[error("letter {letter} is outside the alphabet of size {m}")]
    LetterOutOfRange { letter: usize, m: usize },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource cap exceeded: {what} needs {requested}, limit is {limit}")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("{word} is not a factor of t_{m}")]
    NotAFactor { m: usize, word: String },

    #[error("factor of length {len} is shorter than 2*{m}^{k} = {needed}")]
    TooShort {
        m: usize,
        k: u32,
        len: usize,
        needed: usize,
    },

    #[error("malformed block pair: {0}")]
    MalformedPair(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error(transparent)]
    FormulaDomain(#[from] FormulaDomainError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
