//! The kinds × feature-modes comparison grid.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::metrics::EvalReport;
use crate::classify::{train, Hyperparams, ModelKind};
use crate::corpus::{Corpus, CorpusSplit};
use crate::error::{CorpusError, Error};
use crate::par;
use crate::text::{preprocess, Exclusion, PipelineConfig};
use crate::vectorize::{FeatureMatrix, FeatureMode, Vectorizer, VectorizerConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    /// Drives every seeded model component.
    pub seed: u64,
    pub min_df: usize,
    pub select_k: Option<usize>,
    /// Worker threads for cells (0 = all cores). Ignored without `parallel`.
    pub jobs: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { seed: 0, min_df: 1, select_k: None, jobs: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CellOutcome {
    Ok { accuracy: f64, report: EvalReport },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub kind: ModelKind,
    pub mode: FeatureMode,
    #[serde(flatten)]
    pub outcome: CellOutcome,
    /// Wall-clock training + evaluation time; not serialized so reports
    /// stay byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl GridCell {
    pub fn accuracy(&self) -> Option<f64> {
        match &self.outcome {
            CellOutcome::Ok { accuracy, .. } => Some(*accuracy),
            CellOutcome::Failed { .. } => None,
        }
    }

    pub fn report(&self) -> Option<&EvalReport> {
        match &self.outcome {
            CellOutcome::Ok { report, .. } => Some(report),
            CellOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub mode: FeatureMode,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub labels: Vec<String>,
    pub options: GridOptions,
    pub train_fraction: f64,
    pub split_seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub excluded: Vec<Exclusion>,
    pub features: Vec<FeatureSummary>,
    pub hyperparams: Hyperparams,
    /// Kind-major, feature mode minor, in [`ModelKind::ALL`] × [`FeatureMode::ALL`] order.
    pub cells: Vec<GridCell>,
}

impl GridReport {
    pub fn cell(&self, kind: ModelKind, mode: FeatureMode) -> Option<&GridCell> {
        self.cells.iter().find(|c| c.kind == kind && c.mode == mode)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("grid report serializes");
        s.push('\n');
        s
    }
}

/// Token lists and label indices for both sides of a split, in split order.
/// Documents left without tokens are dropped from either side and listed.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedSplit {
    pub train_tokens: Vec<Vec<String>>,
    pub train_labels: Vec<usize>,
    pub test_tokens: Vec<Vec<String>>,
    pub test_labels: Vec<usize>,
    pub excluded: Vec<Exclusion>,
}

pub fn prepare_split(corpus: &Corpus, split: &CorpusSplit, pipeline: &PipelineConfig) -> Result<PreparedSplit, Error> {
    split.check(corpus)?;
    pipeline.validate()?;
    let processed = preprocess(corpus, pipeline);
    let by_id: HashMap<&str, &[String]> =
        processed.documents.iter().map(|d| (d.id.as_str(), d.tokens.as_slice())).collect();
    let positions = corpus.id_positions();
    let side = |ids: &[String]| {
        let mut tokens = Vec::new();
        let mut labels = Vec::new();
        for id in ids {
            if let Some(t) = by_id.get(id.as_str()) {
                tokens.push(t.to_vec());
                labels.push(corpus.label_of(positions[id.as_str()]));
            }
        }
        (tokens, labels)
    };
    let (train_tokens, train_labels) = side(&split.train_ids);
    let (test_tokens, test_labels) = side(&split.test_ids);
    if train_tokens.is_empty() || test_tokens.is_empty() {
        return Err(CorpusError::InvalidSplit("a split side is empty after preprocessing".into()).into());
    }
    Ok(PreparedSplit { train_tokens, train_labels, test_tokens, test_labels, excluded: processed.excluded })
}

fn run_cell(
    kind: ModelKind,
    train_m: &FeatureMatrix,
    test_m: &FeatureMatrix,
    labels: &[String],
    params: &Hyperparams,
) -> Result<EvalReport, Error> {
    let model = train(kind, train_m, labels.len(), params)?;
    let preds = model.predict_batch(test_m.rows())?;
    Ok(EvalReport::from_predictions(test_m.labels(), &preds, labels)?)
}

/// Preprocesses once, fits one vectorizer per feature mode on the training
/// side, then trains and evaluates every kind on the identical split. A
/// failing cell is recorded, not propagated.
pub fn run_grid(
    corpus: &Corpus,
    split: &CorpusSplit,
    pipeline: &PipelineConfig,
    params: &Hyperparams,
    options: &GridOptions,
) -> Result<GridReport, Error> {
    let mut params = params.clone();
    params.set_seed(options.seed);
    params.validate()?;
    let labels = corpus.labels().names().to_vec();
    let prep = prepare_split(corpus, split, pipeline)?;

    let mut features = Vec::new();
    let mut matrices = Vec::new();
    for mode in FeatureMode::ALL {
        let cfg = VectorizerConfig { mode, min_df: options.min_df, select_k: options.select_k };
        match Vectorizer::fit(&prep.train_tokens, &prep.train_labels, labels.len(), cfg) {
            Ok(v) => {
                features.push(FeatureSummary { mode, dimension: v.dim() });
                let train_m = v.transform_all(&prep.train_tokens, &prep.train_labels);
                let test_m = v.transform_all(&prep.test_tokens, &prep.test_labels);
                matrices.push(Ok((train_m, test_m)));
            }
            Err(e) => {
                features.push(FeatureSummary { mode, dimension: 0 });
                matrices.push(Err(e.to_string()));
            }
        }
    }

    let jobs: Vec<(ModelKind, usize)> =
        ModelKind::ALL.iter().flat_map(|&k| (0..FeatureMode::ALL.len()).map(move |m| (k, m))).collect();
    let cells = par::with_threads(options.jobs, || {
        par::map(&jobs, |&(kind, m)| {
            let start = Instant::now();
            let outcome = match &matrices[m] {
                Err(e) => CellOutcome::Failed { error: e.clone() },
                Ok((train_m, test_m)) => match run_cell(kind, train_m, test_m, &labels, &params) {
                    Ok(report) => CellOutcome::Ok { accuracy: report.accuracy, report },
                    Err(e) => CellOutcome::Failed { error: e.to_string() },
                },
            };
            let mode = FeatureMode::ALL[m];
            if let CellOutcome::Failed { error } = &outcome {
                log::warn!("grid cell {kind}/{mode} failed: {error}");
            }
            GridCell { kind, mode, outcome, elapsed: start.elapsed() }
        })
    });

    Ok(GridReport {
        labels,
        options: options.clone(),
        train_fraction: split.spec.train_fraction,
        split_seed: split.spec.seed,
        n_train: prep.train_labels.len(),
        n_test: prep.test_labels.len(),
        excluded: prep.excluded,
        features,
        hyperparams: params,
        cells,
    })
}

/// Mean accuracy of each cell over several grid runs (failed runs skipped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanCell {
    pub kind: ModelKind,
    pub mode: FeatureMode,
    pub mean_accuracy: Option<f64>,
    pub runs: usize,
}

pub fn mean_accuracies(reports: &[GridReport]) -> Vec<MeanCell> {
    let mut out = Vec::new();
    for kind in ModelKind::ALL {
        for mode in FeatureMode::ALL {
            let accs: Vec<f64> = reports.iter().filter_map(|r| r.cell(kind, mode)?.accuracy()).collect();
            let mean_accuracy = (!accs.is_empty()).then(|| accs.iter().sum::<f64>() / accs.len() as f64);
            out.push(MeanCell { kind, mode, mean_accuracy, runs: accs.len() });
        }
    }
    out
}
