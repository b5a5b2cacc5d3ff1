use thiserror::Error;

/// Errors produced by matrix ingestion, the simulation kernels and the synthesizers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("matrix of dimension {n} needs {expected} entries, found {found}")]
    EntryCount {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error(
        "matrix is not symmetric: entries ({i},{j}) and ({j},{i}) differ by {deviation:e} (1-based)"
    )]
    Asymmetric { i: usize, j: usize, deviation: f64 },
    #[error("dimension {0} is odd; an even dimension is required")]
    OddDimension(usize),
    #[error("{what}: size {size} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subset mask {mask:#b} does not fit in {n} indices")]
    SubsetOutOfRange { mask: u64, n: usize },
    #[error("subset size {0} is odd; an even size is required")]
    OddSubset(usize),
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("imaginary residue {0:e} on a quantity that must be real")]
    ImaginaryResidue(f64),
    #[error("diagonal entry {0} (1-based) is nonzero; a zero-diagonal matrix is required")]
    NonzeroDiagonal(usize),
    #[error("weight-{weight} sector carries no probability mass at t = {t}")]
    DegenerateSector { weight: usize, t: f64 },
    #[error("unknown circuit format {0:?} (expected json or qasm2)")]
    UnknownFormat(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
