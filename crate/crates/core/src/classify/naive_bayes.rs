//! Gaussian and multinomial naive Bayes. Both score with normalised log
//! posteriors `ln P(c | x)`.

use serde::{Deserialize, Serialize};

use super::log_normalize;
use crate::error::TrainError;
use crate::vectorize::{FeatureMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbParams {
    /// Fraction of the largest per-feature variance added to every variance.
    pub var_smoothing: f64,
}

impl Default for GaussianNbParams {
    fn default() -> Self {
        GaussianNbParams { var_smoothing: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultinomialNbParams {
    pub alpha: f64,
}

impl Default for MultinomialNbParams {
    fn default() -> Self {
        MultinomialNbParams { alpha: 1.0 }
    }
}

fn class_sizes(matrix: &FeatureMatrix, n_classes: usize) -> Result<Vec<usize>, TrainError> {
    let mut sizes = vec![0usize; n_classes];
    for &l in matrix.labels() {
        sizes[l] += 1;
    }
    if let Some(empty) = sizes.iter().position(|&s| s == 0) {
        return Err(TrainError::EmptyClass(empty));
    }
    Ok(sizes)
}

fn log_priors(sizes: &[usize]) -> Vec<f64> {
    let n: usize = sizes.iter().sum();
    sizes.iter().map(|&s| (s as f64 / n as f64).ln()).collect()
}

/// Per-class feature means and variances. Training statistics and scoring
/// are dense over the vocabulary, so memory and per-query time are O(V·K).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    pub priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
    pub variance_floor: f64,
    log_priors: Vec<f64>,
}

impl GaussianNb {
    pub fn fit(matrix: &FeatureMatrix, n_classes: usize, params: &GaussianNbParams) -> Result<Self, TrainError> {
        let sizes = class_sizes(matrix, n_classes)?;
        let dim = matrix.dim();
        let mut sums = vec![vec![0.0; dim]; n_classes];
        let mut all_sum = vec![0.0; dim];
        for (row, &l) in matrix.rows().iter().zip(matrix.labels()) {
            for (j, v) in row.iter() {
                sums[l][j] += v;
                all_sum[j] += v;
            }
        }
        let means: Vec<Vec<f64>> = sums
            .iter()
            .zip(&sizes)
            .map(|(s, &n)| s.iter().map(|v| v / n as f64).collect())
            .collect();
        let n_all = matrix.len() as f64;
        let all_mean: Vec<f64> = all_sum.iter().map(|s| s / n_all).collect();

        // Σ (x − μ)² split into the non-zero entries plus the implicit zeros.
        let mut sq = vec![vec![0.0; dim]; n_classes];
        let mut nnz = vec![vec![0usize; dim]; n_classes];
        let mut all_sq = vec![0.0; dim];
        let mut all_nnz = vec![0usize; dim];
        for (row, &l) in matrix.rows().iter().zip(matrix.labels()) {
            for (j, v) in row.iter() {
                let d = v - means[l][j];
                sq[l][j] += d * d;
                nnz[l][j] += 1;
                let d = v - all_mean[j];
                all_sq[j] += d * d;
                all_nnz[j] += 1;
            }
        }
        let mut max_var = 0.0f64;
        for j in 0..dim {
            let zeros = (matrix.len() - all_nnz[j]) as f64;
            let var = (all_sq[j] + zeros * all_mean[j] * all_mean[j]) / n_all;
            max_var = max_var.max(var);
        }
        let variance_floor =
            if max_var > 0.0 { params.var_smoothing * max_var } else { params.var_smoothing };

        let mut variances = vec![vec![0.0; dim]; n_classes];
        for c in 0..n_classes {
            let n = sizes[c] as f64;
            for j in 0..dim {
                let zeros = n - nnz[c][j] as f64;
                let mu = means[c][j];
                variances[c][j] = (sq[c][j] + zeros * mu * mu) / n + variance_floor;
            }
        }
        let log_priors = log_priors(&sizes);
        let priors = log_priors.iter().map(|l| l.exp()).collect();
        Ok(GaussianNb { priors, means, variances, variance_floor, log_priors })
    }

    /// Per-feature `−½ ln(2π σ²_cj)` and `(x_j − μ_cj)² / (2 σ²_cj)`, dense.
    fn feature_terms(&self, dense: &[f64], c: usize) -> (Vec<f64>, Vec<f64>) {
        let norm = self.variances[c].iter().map(|var| -0.5 * (2.0 * std::f64::consts::PI * var).ln()).collect();
        let quad = dense
            .iter()
            .zip(&self.means[c])
            .zip(&self.variances[c])
            .map(|((v, mu), var)| (v - mu) * (v - mu) / (2.0 * var))
            .collect();
        (norm, quad)
    }

    /// Unnormalised `ln P(x | c) + ln P(c)`.
    pub fn joint_log_likelihood(&self, x: &SparseVector) -> Vec<f64> {
        let dense = x.to_dense();
        (0..self.priors.len())
            .map(|c| {
                let (norm, quad) = self.feature_terms(&dense, c);
                self.log_priors[c] + norm.iter().sum::<f64>() - quad.iter().sum::<f64>()
            })
            .collect()
    }

    /// Log posteriors built from per-feature differences between class
    /// pairs, so features with identical class statistics cancel exactly.
    /// Tiny variances make raw log-likelihoods huge and near-ties would
    /// otherwise lose all precision.
    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        let dense = x.to_dense();
        let k = self.priors.len();
        let terms: Vec<(Vec<f64>, Vec<f64>)> = (0..k).map(|c| self.feature_terms(&dense, c)).collect();
        let pair_sum = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).sum::<f64>();
        (0..k)
            .map(|c| {
                let diffs: Vec<f64> = (0..k)
                    .map(|o| {
                        let norm = pair_sum(&terms[o].0, &terms[c].0);
                        let quad = pair_sum(&terms[c].1, &terms[o].1);
                        (self.log_priors[o] - self.log_priors[c]) + norm + quad
                    })
                    .collect();
                let max = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                -(max + diffs.iter().map(|d| (d - max).exp()).sum::<f64>().ln())
            })
            .collect()
    }
}

/// Laplace-smoothed token distributions per class:
/// `P(j | c) = (count_cj + α) / (total_c + α·V)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialNb {
    pub priors: Vec<f64>,
    pub feature_log_prob: Vec<Vec<f64>>,
    log_priors: Vec<f64>,
}

impl MultinomialNb {
    pub fn fit(matrix: &FeatureMatrix, n_classes: usize, params: &MultinomialNbParams) -> Result<Self, TrainError> {
        let sizes = class_sizes(matrix, n_classes)?;
        let dim = matrix.dim();
        let mut counts = vec![vec![0.0; dim]; n_classes];
        for (r, (row, &l)) in matrix.rows().iter().zip(matrix.labels()).enumerate() {
            for (j, v) in row.iter() {
                if v < 0.0 {
                    return Err(TrainError::InvalidHyperparams(format!(
                        "multinomial naive Bayes needs non-negative features (row {r}, feature {j})"
                    )));
                }
                counts[l][j] += v;
            }
        }
        let alpha = params.alpha;
        let feature_log_prob = counts
            .iter()
            .map(|row| {
                let denom = (row.iter().sum::<f64>() + alpha * dim as f64).ln();
                row.iter().map(|c| (c + alpha).ln() - denom).collect()
            })
            .collect();
        let log_priors = log_priors(&sizes);
        let priors = log_priors.iter().map(|l| l.exp()).collect();
        Ok(MultinomialNb { priors, feature_log_prob, log_priors })
    }

    pub fn joint_log_likelihood(&self, x: &SparseVector) -> Vec<f64> {
        self.feature_log_prob
            .iter()
            .zip(&self.log_priors)
            .map(|(flp, lp)| lp + x.dot_dense(flp))
            .collect()
    }

    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        log_normalize(self.joint_log_likelihood(x))
    }
}
