//! Bag-of-words features: vocabulary, unigram counts, TFIDF weights and
//! chi-square selection.

mod chi2;
mod sparse;
mod vocab;

pub use chi2::{chi2_scores, select_top_k, FeatureMask};
pub use sparse::SparseVector;
pub use vocab::{build_vocabulary, Vocabulary};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::VectorizeError;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    Unigram,
    Tfidf,
}

impl FeatureMode {
    pub const ALL: [FeatureMode; 2] = [FeatureMode::Unigram, FeatureMode::Tfidf];

    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureMode::Unigram => "unigram",
            FeatureMode::Tfidf => "tfidf",
        }
    }

    /// Name used in report tables.
    pub fn display_name(&self) -> &'static str {
        match self {
            FeatureMode::Unigram => "Unigram",
            FeatureMode::Tfidf => "TFIDF",
        }
    }
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "unigram" | "bow" | "counts" => Ok(FeatureMode::Unigram),
            "tfidf" | "tf-idf" => Ok(FeatureMode::Tfidf),
            other => Err(format!("unknown feature mode `{other}` (expected unigram or tfidf)")),
        }
    }
}

/// Labeled rows sharing one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    dim: usize,
    rows: Vec<SparseVector>,
    labels: Vec<usize>,
    mode: FeatureMode,
}

impl FeatureMatrix {
    /// Panics if the rows and labels disagree in length or dimension.
    pub fn new(dim: usize, rows: Vec<SparseVector>, labels: Vec<usize>, mode: FeatureMode) -> Self {
        assert_eq!(rows.len(), labels.len(), "rows and labels differ in length");
        assert!(rows.iter().all(|r| r.dim() == dim), "row dimension mismatch");
        FeatureMatrix { dim, rows, labels, mode }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    /// Rows at the given positions, in that order.
    pub fn select_rows(&self, positions: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            dim: self.dim,
            rows: positions.iter().map(|&p| self.rows[p].clone()).collect(),
            labels: positions.iter().map(|&p| self.labels[p]).collect(),
            mode: self.mode,
        }
    }
}

/// Raw occurrence counts; out-of-vocabulary tokens are ignored.
pub fn unigram_vector<T: AsRef<str>>(tokens: &[T], vocab: &Vocabulary) -> SparseVector {
    let pairs = tokens.iter().filter_map(|t| vocab.index_of(t.as_ref())).map(|i| (i, 1.0));
    SparseVector::from_pairs(vocab.len(), pairs).expect("vocabulary indices are in range")
}

/// `ln(n_train_docs / df)`, so a token in every training document gets 0.
pub fn idf_weights(vocab: &Vocabulary) -> Vec<f64> {
    let n = vocab.n_train_docs() as f64;
    vocab.document_frequency().iter().map(|&df| (n / df as f64).ln()).collect()
}

/// Raw count times idf.
pub fn tfidf_vector(counts: &SparseVector, idf: &[f64]) -> Result<SparseVector, VectorizeError> {
    counts.scale_by(idf)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorizerConfig {
    pub mode: FeatureMode,
    pub min_df: usize,
    /// Number of chi-square-selected features; `None` keeps all.
    pub select_k: Option<usize>,
}

impl Default for VectorizerConfig {
    fn default() -> Self {
        VectorizerConfig { mode: FeatureMode::Unigram, min_df: 1, select_k: None }
    }
}

/// A vocabulary, its idf weights and an optional selection mask, all fitted
/// on training documents. Transforming never mutates it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vectorizer {
    pub config: VectorizerConfig,
    pub vocabulary: Vocabulary,
    pub idf: Option<Vec<f64>>,
    pub mask: Option<FeatureMask>,
}

impl Vectorizer {
    /// Fits on `train_docs`. With `select_k`, chi-square scores are computed
    /// from the training matrix of the chosen mode (labels from `train_labels`).
    pub fn fit<D, T>(
        train_docs: &[D],
        train_labels: &[usize],
        n_classes: usize,
        config: VectorizerConfig,
    ) -> Result<Vectorizer, VectorizeError>
    where
        D: AsRef<[T]> + Sync,
        T: AsRef<str>,
    {
        let vocabulary = build_vocabulary(train_docs, config.min_df)?;
        let idf = (config.mode == FeatureMode::Tfidf).then(|| idf_weights(&vocabulary));
        let mut fitted = Vectorizer { config, vocabulary, idf, mask: None };
        if let Some(k) = fitted.config.select_k {
            let full = fitted.transform_all(train_docs, train_labels);
            let scores = chi2_scores(&full, n_classes)?;
            fitted.mask = Some(select_top_k(&scores, k)?);
        }
        Ok(fitted)
    }

    pub fn mode(&self) -> FeatureMode {
        self.config.mode
    }

    /// Output dimension after selection.
    pub fn dim(&self) -> usize {
        self.mask.as_ref().map_or(self.vocabulary.len(), FeatureMask::len)
    }

    pub fn transform<T: AsRef<str>>(&self, tokens: &[T]) -> SparseVector {
        let counts = unigram_vector(tokens, &self.vocabulary);
        let weighted = match &self.idf {
            Some(idf) => tfidf_vector(&counts, idf).expect("idf matches vocabulary"),
            None => counts,
        };
        match &self.mask {
            Some(mask) => mask.apply_vector(&weighted).expect("mask matches vocabulary"),
            None => weighted,
        }
    }

    /// Transforms documents in parallel (when enabled), preserving order.
    pub fn transform_all<D, T>(&self, docs: &[D], labels: &[usize]) -> FeatureMatrix
    where
        D: AsRef<[T]> + Sync,
        T: AsRef<str>,
    {
        let rows = par::map(docs, |d| self.transform(d.as_ref()));
        FeatureMatrix::new(self.dim(), rows, labels.to_vec(), self.config.mode)
    }
}
