use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("internal degree {degree} exceeds the configured bound {bound} (raise --max-degree)")]
    DegreeBound { degree: u32, bound: u32 },

    #[error("rank {rank} out of range: there are {count} monomials of degree {degree}")]
    RankOutOfRange { rank: u64, count: u64, degree: u32 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "integer overflow during fraction-free elimination ({0}); retry with the multi-prime \
         policy (--primes K without --exact) or a smaller block"
    )]
    Overflow(String),

    #[error("unsupported rational policy: {0}")]
    UnsupportedPolicy(String),

    #[error("size guard exceeded: {what} is {size}, limit {limit} (raise {flag})")]
    GuardExceeded {
        what: String,
        size: u64,
        limit: u64,
        flag: &'static str,
    },

    #[error("block t={t}, alpha={alpha:?}: {source}")]
    Block {
        t: usize,
        alpha: Vec<u32>,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn in_block(self, t: usize, alpha: &[u32]) -> Error {
        match self {
            e @ Error::Block { .. } => e,
            other => Error::Block {
                t,
                alpha: alpha.to_vec(),
                source: Box::new(other),
            },
        }
    }
}
