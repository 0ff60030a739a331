use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    // dataset
    #[error("column `{0}` not present in header")]
    MissingColumn(String),
    #[error("cannot parse cell at data row {row}, column {col}: {value:?}")]
    UnparseableCell {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("dataset has no rows or no features")]
    EmptyDataset,
    #[error("classification target has fewer than two classes")]
    SingleClass,
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("bad IDX magic in {path}: found {found:#010x}, expected {expected:#010x}")]
    BadMagic {
        path: PathBuf,
        found: u32,
        expected: u32,
    },
    #[error("image count {images} does not match label count {labels}")]
    CountMismatch { images: usize, labels: usize },
    #[error("file {path} is truncated: need {needed} bytes, found {found}")]
    TruncatedFile {
        path: PathBuf,
        needed: usize,
        found: usize,
    },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("feature names do not match the fitted normalizer")]
    FeatureNameMismatch,
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate feature index {0}")]
    DuplicateIndex(usize),
    #[error("need at least {needed} samples, found {found}")]
    TooFewSamples { needed: usize, found: usize },

    // tree / forest
    #[error("non-finite value at feature {index}")]
    NonFiniteValue { index: usize },
    #[error("class counts are empty or sum to zero")]
    EmptyCounts,
    #[error("target vector is empty")]
    EmptyTargets,
    #[error("node {0} is a leaf")]
    LeafNode(usize),
    #[error("k = {k} outside 1..={p}")]
    KOutOfRange { k: usize, p: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    // ssfi
    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("non-finite input to node importance")]
    NonFiniteInput,

    // eval
    #[error("degenerate variance: predictions or truths are constant")]
    DegenerateVariance,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("external scores missing sample {0}")]
    MissingExternalScores(usize),
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("dataset has no image shape")]
    NotAnImageDataset,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by caller-supplied parameters rather than by the data.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::NonPositiveAlpha(_)
                | Error::KOutOfRange { .. }
                | Error::ConfigMismatch(_)
                | Error::MissingExternalScores(_)
                | Error::IndexOutOfRange { .. }
                | Error::DuplicateIndex(_)
        )
    }
}
