use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the transforms, the table generators and the table store.
#[derive(Debug, Error)]
pub enum SglError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("bandlimit mismatch: plan is for B = {plan}, input requires B = {requested}")]
    BandlimitMismatch { plan: usize, requested: usize },

    #[error("invalid bandlimit {0}: must be at least 1")]
    InvalidBandlimit(usize),

    #[error("quadrature order {order} is outside the supported range 1..={max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("precision fault: {0}")]
    Precision(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: bad magic bytes, not a table file")]
    BadMagic { path: PathBuf },

    #[error("{path}: unsupported format version {found} (this build reads version {supported})")]
    VersionMismatch {
        path: PathBuf,
        found: u32,
        supported: u32,
    },

    #[error("{path}: CRC mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum {
        path: PathBuf,
        stored: u32,
        computed: u32,
    },

    #[error("{path}: table kind {found} where {expected} was expected")]
    KindMismatch {
        path: PathBuf,
        expected: u8,
        found: u8,
    },

    #[error("{path}: malformed table: {reason}")]
    Malformed { path: PathBuf, reason: String },

    #[error("unknown transform variant `{0}` (expected naive, separated or fast)")]
    UnknownVariant(String),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = SglError> = std::result::Result<T, E>;

impl SglError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SglError::Io {
            path: path.into(),
            source,
        }
    }
}
