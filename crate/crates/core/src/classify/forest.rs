//! Random forest: bootstrapped CART trees with random feature subsets,
//! combined by majority vote.

use serde::{Deserialize, Serialize};

use super::argmax;
use super::tree::{DecisionTree, FeatureSampling, TreeParams};
use crate::error::TrainError;
use crate::par;
use crate::rng::SeededRng;
use crate::vectorize::{FeatureMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Candidate features per split; `None` means `floor(√V)` (at least 1).
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            features_per_split: None,
            bootstrap: true,
            max_depth: None,
            min_samples_split: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub trees: Vec<DecisionTree>,
    pub n_classes: usize,
}

impl RandomForest {
    /// Trees are grown in parallel; tree `t` draws from its own stream
    /// derived from `(seed, t)`, so the result does not depend on scheduling.
    pub fn fit(matrix: &FeatureMatrix, n_classes: usize, params: &ForestParams) -> Result<Self, TrainError> {
        let dim = matrix.dim();
        let mtry = params
            .features_per_split
            .unwrap_or_else(|| ((dim as f64).sqrt().floor() as usize).max(1));
        let sampling = if mtry >= dim { FeatureSampling::All } else { FeatureSampling::Random(mtry) };
        let tree_params = TreeParams { max_depth: params.max_depth, min_samples_split: params.min_samples_split };
        let n = matrix.len();
        let trees = par::map_range(params.n_trees, |t| {
            let mut rng = SeededRng::derive(params.seed, t as u64);
            let samples: Vec<usize> =
                if params.bootstrap { (0..n).map(|_| rng.below(n)).collect() } else { (0..n).collect() };
            DecisionTree::fit_samples(matrix, n_classes, &tree_params, &samples, sampling, Some(rng))
        });
        Ok(RandomForest { trees, n_classes })
    }

    /// Votes per class; each tree votes for its leaf's majority class.
    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        let mut votes = vec![0.0; self.n_classes];
        for tree in &self.trees {
            votes[argmax(&tree.scores(x))] += 1.0;
        }
        votes
    }
}
