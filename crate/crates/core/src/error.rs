use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading, validating or splitting a corpus.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("document `{id}` has label `{label}` outside the label set")]
    UnknownLabel { id: String, label: String },
    #[error("document id must be non-empty (line {0})")]
    EmptyId(usize),
    #[error("corpus is empty")]
    Empty,
    #[error("invalid label set: {0}")]
    InvalidLabels(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid generator config: {0}")]
    InvalidGenerator(String),
}

/// Errors raised by the text pipeline configuration.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid pipeline config: {0}")]
    InvalidConfig(String),
    #[error("unknown pipeline profile `{0}`")]
    UnknownProfile(String),
}

#[derive(Debug, Error)]
pub enum VectorizeError {
    #[error("no training documents")]
    NoDocuments,
    #[error("vocabulary is empty after applying min_df = {0}")]
    EmptyVocabulary(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("feature {feature} has negative value {value} in row {row}")]
    NegativeValue { row: usize, feature: usize, value: f64 },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("invalid vocabulary file: {0}")]
    InvalidVocabulary(String),
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training set must contain at least two classes, found {0}")]
    SingleClass(usize),
    #[error("feature dimension is zero")]
    ZeroDimension,
    #[error("non-finite value in row {row}")]
    NonFiniteInput { row: usize },
    #[error("label {label} out of range for {n_classes} classes")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("class {0} has no training rows")]
    EmptyClass(usize),
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparams(String),
    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("non-finite parameter update at epoch {epoch}")]
    NonFiniteUpdate { epoch: usize },
    #[error("dimension mismatch: model expects {expected}, vector has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("k = {k} exceeds the {n} stored training rows")]
    KTooLarge { k: usize, n: usize },
    #[error("model kind mismatch: {0}")]
    WrongKind(String),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("truth has {truth} entries but predictions have {preds}")]
    LengthMismatch { truth: usize, preds: usize },
    #[error("no samples to evaluate")]
    Empty,
    #[error("class index {index} out of range for {k} classes")]
    IndexOutOfRange { index: usize, k: usize },
}

/// Top-level error aggregating every module's failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Vectorize(#[from] VectorizeError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json error in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("unsupported format version {found} (expected {expected})")]
    FormatVersion { found: u32, expected: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
