use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("group order exceeds the configured cap of {cap}")]
    OrderCap { cap: usize },

    #[error("element is not in the group")]
    NotInGroup,

    #[error("subgroup does not belong to this group")]
    ForeignSubgroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid pc presentation: {0}")]
    InvalidPresentation(String),

    #[error("inconsistent pc presentation: overlap {0} fails")]
    Inconsistent(String),

    #[error("collection exceeded the step cap of {cap}")]
    CollectionCap { cap: u64 },

    #[error("integer overflow during {0}")]
    Overflow(&'static str),

    #[error("not nilpotent within {depth} steps of the lower central series")]
    NotNilpotent { depth: usize },

    #[error("{what} exceeds the configured cap of {cap}")]
    Cap { what: &'static str, cap: usize },

    #[error("relator weight exceeds the bound {0}")]
    WeightExceedsBound(usize),

    #[error("word is trivial in the free group")]
    TrivialWord,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
