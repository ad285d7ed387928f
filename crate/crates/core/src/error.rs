use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance needs at least 2 cities, got {0}")]
    TooFewCities(usize),

    #[error("matrix has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("off-diagonal entry ({row}, {col}) must be finite")]
    InfiniteEntry { row: usize, col: usize },

    #[error("entry ({row}, {col}) = {value} exceeds the magnitude bound 2^40")]
    MagnitudeOutOfRange { row: usize, col: usize, value: i64 },

    #[error("cycle does not alternate city/ghost through pairing arcs at position {position}")]
    NotAlternating { position: usize },

    #[error("{0}")]
    InvalidPermutation(String),

    #[error("permutation is not the pairing involution i <-> i+n")]
    NotPairing,

    #[error("{oracle} supports n <= {limit}, got n = {n}")]
    SizeLimit {
        oracle: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("unsupported TSPLIB format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed TSPLIB input: {0}")]
    Malformed(String),

    #[error("non-integer edge weight {0:?}")]
    NonInteger(String),

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("soundness violation: {0}")]
    Soundness(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
