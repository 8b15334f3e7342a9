//! Eight classifier families behind one train/predict contract.

pub mod adam;
pub mod forest;
pub mod knn;
pub mod linear;
pub mod mlp;
pub mod naive_bayes;
pub mod tree;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use adam::{AdamConfig, AdamState};
pub use forest::{ForestParams, RandomForest};
pub use knn::{Distance, Knn, KnnParams};
pub use linear::{hinge_loss, linear_ovr_train_step, LinearLoss, LinearModel, LinearParams, LinearTrainer};
pub use mlp::{mlp_epoch, relu, Mlp, MlpParams, MlpTrainer};
pub use naive_bayes::{GaussianNb, GaussianNbParams, MultinomialNb, MultinomialNbParams};
pub use tree::{gini_impurity, DecisionTree, TreeParams};

use crate::error::{Error, TrainError};
use crate::par;
use crate::vectorize::{FeatureMatrix, SparseVector};

/// Listed in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    GaussianNb,
    MultinomialNb,
    DecisionTree,
    RandomForest,
    LogisticRegression,
    LinearSvm,
    Knn,
    Mlp,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::GaussianNb,
        ModelKind::MultinomialNb,
        ModelKind::DecisionTree,
        ModelKind::RandomForest,
        ModelKind::LogisticRegression,
        ModelKind::LinearSvm,
        ModelKind::Knn,
        ModelKind::Mlp,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::GaussianNb => "gaussian-nb",
            ModelKind::MultinomialNb => "multinomial-nb",
            ModelKind::DecisionTree => "decision-tree",
            ModelKind::RandomForest => "random-forest",
            ModelKind::LogisticRegression => "logistic-regression",
            ModelKind::LinearSvm => "linear-svm",
            ModelKind::Knn => "knn",
            ModelKind::Mlp => "mlp",
        }
    }

    pub fn display_name(&self) -> &'static str {
        match self {
            ModelKind::GaussianNb => "Gaussian Naïve Bayes",
            ModelKind::MultinomialNb => "Multinomial Naïve Bayes",
            ModelKind::DecisionTree => "Decision Tree",
            ModelKind::RandomForest => "Random Forest",
            ModelKind::LogisticRegression => "Logistic Regression",
            ModelKind::LinearSvm => "SVM",
            ModelKind::Knn => "K Nearest Neighbor",
            ModelKind::Mlp => "Multilayer Perceptron",
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            ModelKind::GaussianNb => "GNB",
            ModelKind::MultinomialNb => "MNB",
            ModelKind::DecisionTree => "DT",
            ModelKind::RandomForest => "RF",
            ModelKind::LogisticRegression => "LR",
            ModelKind::LinearSvm => "SVM",
            ModelKind::Knn => "KNN",
            ModelKind::Mlp => "MLP",
        }
    }

    /// Key of this kind's section in [`Hyperparams`].
    pub fn section(&self) -> &'static str {
        match self {
            ModelKind::GaussianNb => "gaussian_nb",
            ModelKind::MultinomialNb => "multinomial_nb",
            ModelKind::DecisionTree => "decision_tree",
            ModelKind::RandomForest => "random_forest",
            ModelKind::LogisticRegression => "logistic_regression",
            ModelKind::LinearSvm => "linear_svm",
            ModelKind::Knn => "knn",
            ModelKind::Mlp => "mlp",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k = s.to_ascii_lowercase().replace('_', "-");
        Ok(match k.as_str() {
            "gaussian-nb" | "gnb" | "gaussiannb" => ModelKind::GaussianNb,
            "multinomial-nb" | "mnb" | "multinomialnb" => ModelKind::MultinomialNb,
            "decision-tree" | "dt" | "tree" => ModelKind::DecisionTree,
            "random-forest" | "rf" | "forest" => ModelKind::RandomForest,
            "logistic-regression" | "lr" | "logreg" => ModelKind::LogisticRegression,
            "linear-svm" | "svm" => ModelKind::LinearSvm,
            "knn" => ModelKind::Knn,
            "mlp" => ModelKind::Mlp,
            _ => return Err(format!("unknown classifier `{s}`")),
        })
    }
}

/// Hyperparameters for every kind; a model reads only its own section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparams {
    pub gaussian_nb: GaussianNbParams,
    pub multinomial_nb: MultinomialNbParams,
    pub knn: KnnParams,
    pub decision_tree: TreeParams,
    pub random_forest: ForestParams,
    pub logistic_regression: LinearParams,
    pub linear_svm: LinearParams,
    pub mlp: MlpParams,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            gaussian_nb: GaussianNbParams::default(),
            multinomial_nb: MultinomialNbParams::default(),
            knn: KnnParams::default(),
            decision_tree: TreeParams::default(),
            random_forest: ForestParams::default(),
            logistic_regression: LinearParams { learning_rate: 0.05, ..LinearParams::default() },
            linear_svm: LinearParams::default(),
            mlp: MlpParams::default(),
        }
    }
}

impl Hyperparams {
    /// Defaults with every seeded component driven by `seed`.
    pub fn with_seed(seed: u64) -> Self {
        let mut h = Hyperparams::default();
        h.set_seed(seed);
        h
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.random_forest.seed = seed;
        self.logistic_regression.seed = seed;
        self.linear_svm.seed = seed;
        self.mlp.seed = seed;
    }

    /// Sets `section.field` (or `field` within `default_section`) from a
    /// string; the value is parsed as JSON, falling back to a JSON string.
    pub fn set(&mut self, key: &str, value: &str, default_section: Option<ModelKind>) -> Result<(), TrainError> {
        let bad = |m: String| TrainError::InvalidHyperparams(m);
        let (section, field) = match key.split_once('.') {
            Some((s, f)) => (s.replace('-', "_"), f.to_owned()),
            None => match default_section {
                Some(kind) => (kind.section().to_owned(), key.to_owned()),
                None => return Err(bad(format!("`{key}` needs a section prefix such as `mlp.{key}`"))),
            },
        };
        let section = match section.parse::<ModelKind>() {
            Ok(kind) => kind.section().to_owned(),
            Err(_) => section,
        };
        let mut tree = serde_json::to_value(&*self).expect("hyperparameters serialize");
        let slot = tree
            .get_mut(&section)
            .ok_or_else(|| bad(format!("unknown section `{section}`")))?
            .get_mut(&field)
            .ok_or_else(|| bad(format!("unknown parameter `{section}.{field}`")))?;
        *slot = serde_json::from_str(value).unwrap_or_else(|_| serde_json::Value::String(value.to_owned()));
        *self = serde_json::from_value(tree).map_err(|e| bad(format!("{key}={value}: {e}")))?;
        self.validate()
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |m: &str| Err(TrainError::InvalidHyperparams(m.to_owned()));
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !(self.gaussian_nb.var_smoothing.is_finite() && self.gaussian_nb.var_smoothing > 0.0) {
            return bad("gaussian_nb.var_smoothing must be > 0");
        }
        if !(self.multinomial_nb.alpha.is_finite() && self.multinomial_nb.alpha > 0.0) {
            return bad("multinomial_nb.alpha must be > 0");
        }
        if self.knn.k == 0 {
            return bad("knn.k must be >= 1");
        }
        if self.decision_tree.min_samples_split < 2 || self.random_forest.min_samples_split < 2 {
            return bad("min_samples_split must be >= 2");
        }
        let rf = &self.random_forest;
        if rf.n_trees == 0 || rf.features_per_split == Some(0) {
            return bad("random_forest.n_trees and features_per_split must be >= 1");
        }
        for (name, p) in [("logistic_regression", &self.logistic_regression), ("linear_svm", &self.linear_svm)] {
            if !positive(p.learning_rate) || p.epochs == 0 || p.batch_size == 0 {
                return Err(TrainError::InvalidHyperparams(format!(
                    "{name}: learning_rate must be > 0, epochs and batch_size >= 1"
                )));
            }
            if !(p.l2_strength.is_finite() && p.l2_strength >= 0.0) {
                return Err(TrainError::InvalidHyperparams(format!("{name}.l2_strength must be >= 0")));
            }
        }
        let m = &self.mlp;
        if m.hidden_units == 0 || m.epochs == 0 || m.batch_size == 0 {
            return bad("mlp.hidden_units, epochs and batch_size must be >= 1");
        }
        if !positive(m.learning_rate) || !positive(m.adam_epsilon) {
            return bad("mlp.learning_rate and adam_epsilon must be > 0");
        }
        let unit = |b: f64| b > 0.0 && b < 1.0;
        if !unit(m.adam_beta1) || !unit(m.adam_beta2) {
            return bad("mlp.adam_beta1 and adam_beta2 must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Kind-specific fitted parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "kebab-case")]
pub enum ModelPayload {
    GaussianNb(GaussianNb),
    MultinomialNb(MultinomialNb),
    DecisionTree(DecisionTree),
    RandomForest(RandomForest),
    LogisticRegression(LinearModel),
    LinearSvm(LinearModel),
    Knn(Knn),
    Mlp(Mlp),
}

impl ModelPayload {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelPayload::GaussianNb(_) => ModelKind::GaussianNb,
            ModelPayload::MultinomialNb(_) => ModelKind::MultinomialNb,
            ModelPayload::DecisionTree(_) => ModelKind::DecisionTree,
            ModelPayload::RandomForest(_) => ModelKind::RandomForest,
            ModelPayload::LogisticRegression(_) => ModelKind::LogisticRegression,
            ModelPayload::LinearSvm(_) => ModelKind::LinearSvm,
            ModelPayload::Knn(_) => ModelKind::Knn,
            ModelPayload::Mlp(_) => ModelKind::Mlp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub label_count: usize,
    pub feature_dimension: usize,
    pub hyperparams: Hyperparams,
    #[serde(flatten)]
    pub payload: ModelPayload,
}

/// Per-epoch training losses (iterative kinds only).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epoch_losses: Vec<f64>,
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    model: TrainedModel,
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        self.payload.kind()
    }

    fn check_dim(&self, x: &SparseVector) -> Result<(), TrainError> {
        if x.dim() != self.feature_dimension {
            return Err(TrainError::DimensionMismatch { expected: self.feature_dimension, actual: x.dim() });
        }
        Ok(())
    }

    /// Log-posteriors (naive Bayes), votes (KNN, forest), leaf frequencies
    /// (tree), one-vs-rest margins (SVM) or probabilities (LR, MLP).
    pub fn predict_scores(&self, x: &SparseVector) -> Result<Vec<f64>, TrainError> {
        self.check_dim(x)?;
        Ok(match &self.payload {
            ModelPayload::GaussianNb(m) => m.scores(x),
            ModelPayload::MultinomialNb(m) => m.scores(x),
            ModelPayload::DecisionTree(m) => m.scores(x),
            ModelPayload::RandomForest(m) => m.scores(x),
            ModelPayload::LogisticRegression(m) | ModelPayload::LinearSvm(m) => m.scores(x),
            ModelPayload::Knn(m) => m.scores(x),
            ModelPayload::Mlp(m) => m.probabilities(x),
        })
    }

    /// Arg-max of [`predict_scores`](Self::predict_scores), lowest index on ties.
    pub fn predict(&self, x: &SparseVector) -> Result<usize, TrainError> {
        Ok(argmax(&self.predict_scores(x)?))
    }

    pub fn predict_batch(&self, rows: &[SparseVector]) -> Result<Vec<usize>, TrainError> {
        par::map(rows, |x| self.predict(x)).into_iter().collect()
    }

    /// Stored training rows nearest to `query` (KNN models only).
    pub fn knn_neighbors(&self, query: &SparseVector, k: usize) -> Result<Vec<usize>, TrainError> {
        self.check_dim(query)?;
        match &self.payload {
            ModelPayload::Knn(m) => m.neighbors(query, k),
            other => Err(TrainError::WrongKind(format!("{} is not a KNN model", other.kind()))),
        }
    }

    pub fn to_json(&self) -> Result<String, Error> {
        let file = ModelFile { format_version: MODEL_FORMAT_VERSION, model: self.clone() };
        serde_json::to_string(&file).map_err(|source| Error::Json { context: "model".into(), source })
    }

    pub fn from_json(json: &str) -> Result<Self, Error> {
        let probe: serde_json::Value =
            serde_json::from_str(json).map_err(|source| Error::Json { context: "model".into(), source })?;
        let found = probe.get("format_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if found != MODEL_FORMAT_VERSION {
            return Err(Error::FormatVersion { found, expected: MODEL_FORMAT_VERSION });
        }
        let file: ModelFile =
            serde_json::from_value(probe).map_err(|source| Error::Json { context: "model".into(), source })?;
        Ok(file.model)
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        fs::write(path, self.to_json()?).map_err(|source| Error::Io { path: path.to_owned(), source })
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let raw = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::from_json(&raw)
    }
}

fn check_training_set(matrix: &FeatureMatrix, n_classes: usize) -> Result<(), TrainError> {
    if matrix.is_empty() {
        return Err(TrainError::EmptyTrainingSet);
    }
    if matrix.dim() == 0 {
        return Err(TrainError::ZeroDimension);
    }
    let mut present = vec![false; n_classes];
    for &l in matrix.labels() {
        if l >= n_classes {
            return Err(TrainError::LabelOutOfRange { label: l, n_classes });
        }
        present[l] = true;
    }
    let distinct = present.iter().filter(|p| **p).count();
    if distinct < 2 {
        return Err(TrainError::SingleClass(distinct));
    }
    for (row, r) in matrix.rows().iter().enumerate() {
        if !r.values().iter().all(|v| v.is_finite()) {
            return Err(TrainError::NonFiniteInput { row });
        }
    }
    Ok(())
}

pub fn train(
    kind: ModelKind,
    matrix: &FeatureMatrix,
    n_classes: usize,
    params: &Hyperparams,
) -> Result<TrainedModel, TrainError> {
    train_logged(kind, matrix, n_classes, params).map(|(model, _)| model)
}

/// Trains one model; deterministic given the seeds in `params`.
pub fn train_logged(
    kind: ModelKind,
    matrix: &FeatureMatrix,
    n_classes: usize,
    params: &Hyperparams,
) -> Result<(TrainedModel, TrainLog), TrainError> {
    params.validate()?;
    check_training_set(matrix, n_classes)?;
    let dim = matrix.dim();
    let mut log = TrainLog::default();
    let payload = match kind {
        ModelKind::GaussianNb => ModelPayload::GaussianNb(GaussianNb::fit(matrix, n_classes, &params.gaussian_nb)?),
        ModelKind::MultinomialNb => {
            ModelPayload::MultinomialNb(MultinomialNb::fit(matrix, n_classes, &params.multinomial_nb)?)
        }
        ModelKind::DecisionTree => {
            ModelPayload::DecisionTree(DecisionTree::fit(matrix, n_classes, &params.decision_tree)?)
        }
        ModelKind::RandomForest => {
            ModelPayload::RandomForest(RandomForest::fit(matrix, n_classes, &params.random_forest)?)
        }
        ModelKind::Knn => ModelPayload::Knn(Knn::fit(matrix, n_classes, &params.knn)?),
        ModelKind::LogisticRegression | ModelKind::LinearSvm => {
            let (loss, p) = if kind == ModelKind::LinearSvm {
                (LinearLoss::Hinge, params.linear_svm)
            } else {
                (LinearLoss::Softmax, params.logistic_regression)
            };
            let mut trainer = LinearTrainer::new(loss, dim, n_classes, p);
            for _ in 0..p.epochs {
                log.epoch_losses.push(linear_ovr_train_step(&mut trainer, matrix)?);
            }
            if kind == ModelKind::LinearSvm {
                ModelPayload::LinearSvm(trainer.model)
            } else {
                ModelPayload::LogisticRegression(trainer.model)
            }
        }
        ModelKind::Mlp => {
            let mut trainer = MlpTrainer::new(dim, n_classes, params.mlp);
            for _ in 0..params.mlp.epochs {
                log.epoch_losses.push(mlp_epoch(&mut trainer, matrix)?);
            }
            ModelPayload::Mlp(trainer.net)
        }
    };
    let model = TrainedModel { label_count: n_classes, feature_dimension: dim, hyperparams: params.clone(), payload };
    Ok((model, log))
}

/// Index of the largest score; the first one wins ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Subtracts log-sum-exp so the scores are log-probabilities.
pub fn log_normalize(mut scores: Vec<f64>) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_sum = scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
    scores.iter_mut().for_each(|s| *s = (*s - max) - log_sum);
    scores
}
