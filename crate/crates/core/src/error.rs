use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {len} qubits")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cannot parse Pauli string {0:?}: only I, X, Y, Z are allowed")]
    ParsePauli(String),

    #[error("cannot parse local Clifford {0:?}")]
    ParseClifford(String),

    #[error("invalid generator set: {0}")]
    InvalidGeneratorSet(String),

    #[error("recombination matrix is not square and non-singular")]
    InvalidRecombination,

    #[error("element set is not closed under multiplication")]
    NotClosed,

    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed generator subset: {0}")]
    MalformedSubset(String),

    #[error("{stage}: capacity exceeded (limit {limit})")]
    Capacity { stage: &'static str, limit: usize },

    #[error("dataset is missing {} stabilizer record(s): {}", .missing.len(), .missing.join(", "))]
    IncompleteData { missing: Vec<String> },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("{0}")]
    Undefined(String),

    #[error("internal defect: {0}")]
    Defect(String),

    #[error("unknown code {0:?}")]
    UnknownCode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
