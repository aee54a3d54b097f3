use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree {0} outside the supported range 1..=24")]
    UnsupportedDegree(u32),

    #[error("modulus {modulus:#x} is not a degree-{m} polynomial with constant term")]
    MalformedModulus { m: u32, modulus: u64 },

    #[error("modulus {modulus:#x} is reducible: it has an irreducible factor of degree {factor_degree}")]
    ReducibleModulus { modulus: u64, factor_degree: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{operation} needs n <= {limit}, got n = {n}{hint}")]
    Capacity {
        operation: &'static str,
        n: u32,
        limit: u32,
        hint: &'static str,
    },

    #[error("table entry {value} at index {index} does not fit in {n} bits")]
    EntryOutOfRange { index: usize, value: u64, n: u32 },

    #[error("table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },

    #[error("function is not a permutation (image size {image_size} of {domain_size})")]
    NotPermutation { image_size: usize, domain_size: usize },

    #[error("linear part is singular: rank {rank} of {dim}")]
    Singular { rank: usize, dim: usize },

    #[error("invalid block partition: {0}")]
    BlockPartition(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
