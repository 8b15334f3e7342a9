//! Text classification for Arabic-script (Pashto) documents: corpus loading
//! and splitting, normalization and tokenization, unigram/TFIDF features with
//! chi-square selection, eight classifier families, and an evaluation grid.
//!
//! With the default `parallel` feature, preprocessing, vectorization, batch
//! prediction, forest training and grid cells run on rayon; without it the
//! same code runs sequentially and produces identical results.

pub mod bundle;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod par;
pub mod rng;
pub mod synth;
pub mod text;
pub mod vectorize;

pub use bundle::ModelBundle;
pub use classify::{train, train_logged, Hyperparams, ModelKind, TrainLog, TrainedModel};
pub use corpus::{load_corpus, save_corpus, stratified_split, validate, Corpus, CorpusSplit, Document, LabelSet, SplitSpec};
pub use error::{Error, Result};
pub use eval::{run_grid, EvalReport, GridOptions, GridReport};
pub use rng::SeededRng;
pub use synth::{generate, SynthConfig};
pub use text::{preprocess, process_text, PipelineConfig};
pub use vectorize::{FeatureMatrix, FeatureMode, SparseVector, Vectorizer, VectorizerConfig};
