//! A self-contained trained artifact: labels, pipeline, vectorizer and model.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::TrainedModel;
use crate::error::{Error, TrainError, VectorizeError};
use crate::text::{process_text, PipelineConfig};
use crate::vectorize::Vectorizer;

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format_version: u32,
    pub labels: Vec<String>,
    pub pipeline: PipelineConfig,
    pub vectorizer: Vectorizer,
    pub model: TrainedModel,
}

impl ModelBundle {
    pub fn new(
        labels: Vec<String>,
        pipeline: PipelineConfig,
        vectorizer: Vectorizer,
        model: TrainedModel,
    ) -> Result<Self, Error> {
        if model.feature_dimension != vectorizer.dim() {
            return Err(VectorizeError::DimensionMismatch { expected: model.feature_dimension, actual: vectorizer.dim() }
                .into());
        }
        if model.label_count != labels.len() {
            return Err(TrainError::LabelOutOfRange { label: model.label_count, n_classes: labels.len() }.into());
        }
        Ok(ModelBundle { format_version: BUNDLE_FORMAT_VERSION, labels, pipeline, vectorizer, model })
    }

    /// Raw text to class index.
    pub fn classify(&self, raw: &str) -> Result<usize, Error> {
        let tokens = process_text(raw, &self.pipeline);
        Ok(self.model.predict(&self.vectorizer.transform(&tokens))?)
    }

    pub fn to_json(&self) -> Result<String, Error> {
        serde_json::to_string(self).map_err(|source| Error::Json { context: "model bundle".into(), source })
    }

    pub fn from_json(json: &str) -> Result<Self, Error> {
        let bundle: ModelBundle =
            serde_json::from_str(json).map_err(|source| Error::Json { context: "model bundle".into(), source })?;
        if bundle.format_version != BUNDLE_FORMAT_VERSION {
            return Err(Error::FormatVersion { found: bundle.format_version, expected: BUNDLE_FORMAT_VERSION });
        }
        Ok(bundle)
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        fs::write(path, self.to_json()?).map_err(|source| Error::Io { path: path.to_owned(), source })
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let raw = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::from_json(&raw)
    }
}
