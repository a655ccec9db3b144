use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis index {index} out of range (table has {len} entries)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("tree id {0} is not registered")]
    UnknownTree(u32),

    #[error("series live on different tree sets")]
    RegistryMismatch,

    #[error("tree set was frozen without color-swapped trees")]
    SwapUnavailable,

    #[error("degree {requested} exceeds the tree set bound {max}")]
    DegreeOutOfRange { requested: usize, max: usize },

    #[error("memory cap of {limit_mb} MB exceeded; last complete degree is {degree_reached}")]
    ResourceLimit { degree_reached: usize, limit_mb: u64 },

    #[error("inconsistent linear system at degree {degree}")]
    InconsistentSystem { degree: usize },

    #[error("unknown free parameter index {0}")]
    UnknownParameter(usize),

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("continuation path from 0 to {0} passes through another collision")]
    PathCollision(num_complex::Complex64),

    #[error("eigenvalue logarithms could not be continued past {0}")]
    ContinuationStalled(num_complex::Complex64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid basis table: {0}")]
    InvalidBasis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
