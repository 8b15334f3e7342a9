//! Brute-force k-nearest neighbours over sparse vectors.

use serde::{Deserialize, Serialize};

use crate::error::TrainError;
use crate::vectorize::{FeatureMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distance {
    Euclidean,
    /// `1 − cos(a, b)`; a zero vector is at distance 1 from everything.
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
    pub metric: Distance,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5, metric: Distance::Euclidean }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knn {
    pub k: usize,
    pub metric: Distance,
    pub rows: Vec<SparseVector>,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

impl Knn {
    pub fn fit(matrix: &FeatureMatrix, n_classes: usize, params: &KnnParams) -> Result<Self, TrainError> {
        if params.k > matrix.len() {
            return Err(TrainError::KTooLarge { k: params.k, n: matrix.len() });
        }
        Ok(Knn {
            k: params.k,
            metric: params.metric,
            rows: matrix.rows().to_vec(),
            labels: matrix.labels().to_vec(),
            n_classes,
        })
    }

    fn distance(&self, a: &SparseVector, b: &SparseVector) -> f64 {
        match self.metric {
            Distance::Euclidean => a.squared_distance(b),
            Distance::Cosine => {
                let norms = a.squared_norm() * b.squared_norm();
                if norms == 0.0 {
                    1.0
                } else {
                    1.0 - a.dot(b) / norms.sqrt()
                }
            }
        }
    }

    /// Row indices of the `k` nearest training rows, closest first; equal
    /// distances keep row order.
    pub fn neighbors(&self, query: &SparseVector, k: usize) -> Result<Vec<usize>, TrainError> {
        if k > self.rows.len() {
            return Err(TrainError::KTooLarge { k, n: self.rows.len() });
        }
        let mut dist: Vec<(f64, usize)> =
            self.rows.iter().enumerate().map(|(i, r)| (self.distance(query, r), i)).collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(dist.into_iter().take(k).map(|(_, i)| i).collect())
    }

    /// Vote counts among the `k` neighbours.
    pub fn scores(&self, query: &SparseVector) -> Vec<f64> {
        let mut votes = vec![0.0; self.n_classes];
        for i in self.neighbors(query, self.k).expect("k validated at fit") {
            votes[self.labels[i]] += 1.0;
        }
        votes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::argmax;
    use crate::vectorize::FeatureMode;

    fn line(points: &[f64], labels: &[usize], k: usize) -> Knn {
        let m = FeatureMatrix::new(
            1,
            points.iter().map(|p| SparseVector::from_dense(&[*p])).collect(),
            labels.to_vec(),
            FeatureMode::Unigram,
        );
        Knn::fit(&m, 2, &KnnParams { k, metric: Distance::Euclidean }).unwrap()
    }

    #[test]
    fn three_neighbours_on_a_line() {
        let knn = line(&[0.0, 1.0, 10.0], &[0, 0, 1], 3);
        let q = SparseVector::from_dense(&[0.4]);
        assert_eq!(knn.neighbors(&q, 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(argmax(&knn.scores(&q)), 0);
        assert!(matches!(knn.neighbors(&q, 5), Err(TrainError::KTooLarge { k: 5, n: 3 })));
    }

    #[test]
    fn k_equals_n_is_global_majority() {
        let knn = line(&[0.0, 5.0, 6.0], &[0, 1, 1], 3);
        assert_eq!(argmax(&knn.scores(&SparseVector::from_dense(&[0.0]))), 1);
    }

    #[test]
    fn duplicates_fill_first_slots_in_row_order() {
        let knn = line(&[3.0, 1.0, 1.0, 1.0], &[1, 0, 1, 0], 2);
        let q = SparseVector::from_dense(&[1.0]);
        assert_eq!(knn.neighbors(&q, 3).unwrap(), vec![1, 2, 3]);
        // one vote each → lower class index wins
        assert_eq!(argmax(&knn.scores(&q)), 0);
    }

    #[test]
    fn cosine_handles_zero_vectors() {
        let m = FeatureMatrix::new(
            2,
            vec![SparseVector::from_dense(&[1.0, 0.0]), SparseVector::from_dense(&[0.0, 1.0])],
            vec![0, 1],
            FeatureMode::Unigram,
        );
        let knn = Knn::fit(&m, 2, &KnnParams { k: 1, metric: Distance::Cosine }).unwrap();
        assert_eq!(knn.scores(&SparseVector::from_dense(&[2.0, 0.1])), vec![1.0, 0.0]);
        assert_eq!(knn.scores(&SparseVector::zeros(2)), vec![1.0, 0.0]);
    }
}
