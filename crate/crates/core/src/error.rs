use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rose needs at least one petal")]
    EmptyRose,
    #[error("adjacency matrix is not square: {rows} rows for {vertices} vertices")]
    NonSquare { rows: usize, vertices: usize },
    #[error("adjacency row {row} has {len} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex {0:?} emits no edges; graph is not regular")]
    NotRegular(String),
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("group ring order mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("cyclic group order must be at least 2, got {0}")]
    BadModulus(usize),
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("brute-force search needs {needed} candidates, limit is {limit}")]
    BruteForceBound { needed: String, limit: u64 },
    #[error("brute-force oracle needs a finite target module")]
    InfiniteTarget,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid graph json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
