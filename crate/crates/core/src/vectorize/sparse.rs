use serde::{Deserialize, Serialize};

use crate::error::VectorizeError;

/// Sparse vector: strictly increasing indices, finite non-zero values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector { dim, indices: Vec::new(), values: Vec::new() }
    }

    /// Builds from unordered pairs. Duplicate indices are summed and zeros
    /// dropped; indices must be `< dim` and values finite.
    pub fn from_pairs(
        dim: usize,
        pairs: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self, VectorizeError> {
        let mut pairs: Vec<(usize, f64)> = pairs.into_iter().collect();
        pairs.sort_by_key(|p| p.0);
        let mut indices = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            if i >= dim {
                return Err(VectorizeError::DimensionMismatch { expected: dim, actual: i + 1 });
            }
            if !v.is_finite() {
                return Err(VectorizeError::InvalidVocabulary(format!(
                    "non-finite value at index {i}"
                )));
            }
            if indices.last() == Some(&i) {
                *values.last_mut().expect("paired") += v;
            } else {
                indices.push(i);
                values.push(v);
            }
        }
        let mut out = SparseVector { dim, indices, values };
        out.drop_zeros();
        Ok(out)
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        let (indices, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .unzip();
        SparseVector { dim: dense.len(), indices, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.indices.binary_search(&index) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    pub fn squared_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b, mut acc) = (0, 0, 0.0);
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    /// Squared Euclidean distance by merging the two index lists.
    pub fn squared_distance(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b, mut acc) = (0, 0, 0.0);
        while a < self.indices.len() || b < other.indices.len() {
            let ia = self.indices.get(a).copied().unwrap_or(usize::MAX);
            let ib = other.indices.get(b).copied().unwrap_or(usize::MAX);
            let d = if ia == ib {
                let d = self.values[a] - other.values[b];
                a += 1;
                b += 1;
                d
            } else if ia < ib {
                a += 1;
                self.values[a - 1]
            } else {
                b += 1;
                other.values[b - 1]
            };
            acc += d * d;
        }
        acc
    }

    /// Element-wise product with a dense weight vector, zeros dropped.
    pub fn scale_by(&self, weights: &[f64]) -> Result<SparseVector, VectorizeError> {
        if weights.len() != self.dim {
            return Err(VectorizeError::DimensionMismatch {
                expected: self.dim,
                actual: weights.len(),
            });
        }
        let mut out = SparseVector {
            dim: self.dim,
            indices: self.indices.clone(),
            values: self.iter().map(|(i, v)| v * weights[i]).collect(),
        };
        out.drop_zeros();
        Ok(out)
    }

    fn drop_zeros(&mut self) {
        if self.values.iter().all(|v| *v != 0.0) {
            return;
        }
        let (indices, values) = self.iter().filter(|(_, v)| *v != 0.0).unzip();
        self.indices = indices;
        self.values = values;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pairs_sorts_merges_and_drops_zeros() {
        let v = SparseVector::from_pairs(5, [(3, 1.0), (1, 2.0), (3, 1.0), (4, 0.0)]).unwrap();
        assert_eq!(v.indices(), &[1, 3]);
        assert_eq!(v.values(), &[2.0, 2.0]);
        assert!(SparseVector::from_pairs(2, [(2, 1.0)]).is_err());
        assert!(SparseVector::from_pairs(2, [(0, f64::NAN)]).is_err());
    }

    #[test]
    fn distances_match_dense() {
        let a = SparseVector::from_dense(&[0.0, 1.0, 0.0, 3.0]);
        let b = SparseVector::from_dense(&[2.0, 1.0, 0.0, 0.0]);
        assert_eq!(a.squared_distance(&b), 4.0 + 0.0 + 9.0);
        assert_eq!(a.dot(&b), 1.0);
        assert_eq!(a.get(3), 3.0);
        assert_eq!(a.get(2), 0.0);
        assert_eq!(a.to_dense(), vec![0.0, 1.0, 0.0, 3.0]);
        assert_eq!(SparseVector::zeros(4).squared_distance(&a), 10.0);
    }

    #[test]
    fn scale_drops_zero_weights() {
        let a = SparseVector::from_dense(&[1.0, 2.0]);
        let s = a.scale_by(&[0.0, 3.0]).unwrap();
        assert_eq!(s.indices(), &[1]);
        assert_eq!(s.values(), &[6.0]);
        assert!(a.scale_by(&[1.0]).is_err());
    }
}
