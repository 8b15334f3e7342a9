//! Chi-square feature scoring and top-k selection.

use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, SparseVector};
use crate::error::VectorizeError;

/// Chi-square statistic of per-class feature mass against the mass expected
/// from class sizes alone.
///
/// For feature `j`: `O[c] = Σ x_ij` over rows of class `c`,
/// `E[c] = (n_c / n) · Σ_i x_ij`, score `= Σ_c (O[c] − E[c])² / E[c]`,
/// skipping classes with `E[c] = 0`.
pub fn chi2_scores(matrix: &FeatureMatrix, n_classes: usize) -> Result<Vec<f64>, VectorizeError> {
    let dim = matrix.dim();
    let mut observed = vec![vec![0.0; dim]; n_classes];
    let mut class_rows = vec![0usize; n_classes];
    for (r, (row, &label)) in matrix.rows().iter().zip(matrix.labels()).enumerate() {
        class_rows[label] += 1;
        for (j, v) in row.iter() {
            if v < 0.0 {
                return Err(VectorizeError::NegativeValue { row: r, feature: j, value: v });
            }
            observed[label][j] += v;
        }
    }
    let n_rows = matrix.len() as f64;
    let mut totals = vec![0.0; dim];
    for class in &observed {
        for (t, o) in totals.iter_mut().zip(class) {
            *t += o;
        }
    }
    let scores = (0..dim)
        .map(|j| {
            (0..n_classes)
                .filter_map(|c| {
                    let expected = class_rows[c] as f64 / n_rows * totals[j];
                    (expected > 0.0).then(|| {
                        let diff = observed[c][j] - expected;
                        diff * diff / expected
                    })
                })
                .sum()
        })
        .collect();
    Ok(scores)
}

/// Kept feature indices (ascending) plus the scores they were chosen from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMask {
    pub kept_indices: Vec<usize>,
    pub scores: Vec<f64>,
}

impl FeatureMask {
    pub fn original_dim(&self) -> usize {
        self.scores.len()
    }

    pub fn len(&self) -> usize {
        self.kept_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept_indices.is_empty()
    }

    /// Restricts a vector to the kept features, renumbered densely.
    pub fn apply_vector(&self, v: &SparseVector) -> Result<SparseVector, VectorizeError> {
        if v.dim() != self.original_dim() {
            return Err(VectorizeError::DimensionMismatch {
                expected: self.original_dim(),
                actual: v.dim(),
            });
        }
        // both index lists are sorted, so a merge walk suffices
        let mut pairs = Vec::new();
        let mut k = 0;
        for (i, value) in v.iter() {
            while k < self.kept_indices.len() && self.kept_indices[k] < i {
                k += 1;
            }
            if k < self.kept_indices.len() && self.kept_indices[k] == i {
                pairs.push((k, value));
            }
        }
        SparseVector::from_pairs(self.len(), pairs)
    }

    pub fn apply(&self, matrix: &FeatureMatrix) -> Result<FeatureMatrix, VectorizeError> {
        let rows = matrix
            .rows()
            .iter()
            .map(|r| self.apply_vector(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FeatureMatrix::new(self.len(), rows, matrix.labels().to_vec(), matrix.mode()))
    }
}

/// Keeps the `k` best scores; ties go to the lower index. `k > V` is clamped.
pub fn select_top_k(scores: &[f64], k: usize) -> Result<FeatureMask, VectorizeError> {
    if k == 0 {
        return Err(VectorizeError::ZeroK);
    }
    let k = if k > scores.len() {
        log::warn!("select k = {k} exceeds {} features; keeping all", scores.len());
        scores.len()
    } else {
        k
    };
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut kept_indices = order[..k].to_vec();
    kept_indices.sort_unstable();
    Ok(FeatureMask { kept_indices, scores: scores.to_vec() })
}
