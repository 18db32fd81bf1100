use thiserror::Error;

/// Errors raised by the library. Algorithmic failures of the packing process
/// (an empty candidate set, a Hall violation) are not errors; they are
/// reported as data inside [`crate::engine::PackingResult`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has degeneracy {actual}, exceeding the declared bound {bound}")]
    NotDegenerate { actual: usize, bound: usize },

    #[error("guest {index} has degeneracy {actual}, exceeding the declared bound {bound}")]
    GuestNotDegenerate {
        index: usize,
        actual: usize,
        bound: usize,
    },

    #[error("guest {index} has {vertices} vertices but the host has only {n}")]
    GuestTooLarge {
        index: usize,
        vertices: usize,
        n: usize,
    },

    #[error(
        "guest {index}: equal-degree independent set has {found} vertices, \
         fewer than the requested tail length {requested}"
    )]
    TailTooShort {
        index: usize,
        found: usize,
        requested: usize,
    },

    #[error("density of the audited graph is zero")]
    DegenerateDensity,

    #[error("excluded set covers every vertex")]
    EverythingExcluded,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spec error at position {position}: {message}")]
    Spec { position: usize, message: String },

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
