use thiserror::Error;

/// Errors raised by the balancing library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("zero vector at index {index}")]
    ZeroVector { index: usize },
    #[error("vectors at indices {indices:?} are not unit vectors under the given norm")]
    NotUnit { indices: Vec<usize> },
    #[error("expected an odd number of vectors, got {n}")]
    EvenCardinality { n: usize },
    #[error("all vectors are parallel; the hull of ±V has no interior")]
    DegenerateHull,
    #[error("instance of size {n} exceeds the enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("prefix sum has norm {norm}, outside the admissible range {limit}")]
    PrefixOutOfRange { norm: f64, limit: f64 },
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("empty vector list")]
    Empty,
    #[error("invalid exponent p = {0}; expected p >= 1")]
    InvalidExponent(f64),
    #[error("invalid symmetric polygon: {0}")]
    InvalidPolygon(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
