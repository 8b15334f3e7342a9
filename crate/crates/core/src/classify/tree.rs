//! CART decision tree: binary threshold splits chosen by Gini impurity,
//! grown until pure (no pruning).

use serde::{Deserialize, Serialize};

use crate::error::TrainError;
use crate::rng::SeededRng;
use crate::vectorize::{FeatureMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: None, min_samples_split: 2 }
    }
}

/// `1 − Σ (n_c / n)²`. Fails on an all-zero count vector.
pub fn gini_impurity(class_counts: &[usize]) -> Result<f64, TrainError> {
    let n: usize = class_counts.iter().sum();
    if n == 0 {
        return Err(TrainError::EmptyTrainingSet);
    }
    Ok(gini_of(class_counts, n))
}

fn gini_of(counts: &[usize], n: usize) -> f64 {
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    /// `x[feature] <= threshold` goes left.
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { counts: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
    pub n_classes: usize,
}

/// How many candidate features a node examines.
#[derive(Debug, Clone, Copy)]
pub(crate) enum FeatureSampling {
    All,
    /// Up to this many randomly chosen non-constant features.
    Random(usize),
}

struct Candidate {
    impurity: f64,
    feature: usize,
    threshold: f64,
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        (self.impurity, self.feature)
            .partial_cmp(&(other.impurity, other.feature))
            .is_some_and(|o| o.is_lt() || (o.is_eq() && self.threshold < other.threshold))
    }
}

struct Builder<'a> {
    rows: &'a [SparseVector],
    labels: &'a [usize],
    n_classes: usize,
    params: TreeParams,
    sampling: FeatureSampling,
    rng: Option<SeededRng>,
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn fit(matrix: &FeatureMatrix, n_classes: usize, params: &TreeParams) -> Result<Self, TrainError> {
        let samples: Vec<usize> = (0..matrix.len()).collect();
        Ok(Self::fit_samples(matrix, n_classes, params, &samples, FeatureSampling::All, None))
    }

    /// Grows a tree on `samples` (row indices, repeats allowed).
    pub(crate) fn fit_samples(
        matrix: &FeatureMatrix,
        n_classes: usize,
        params: &TreeParams,
        samples: &[usize],
        sampling: FeatureSampling,
        rng: Option<SeededRng>,
    ) -> Self {
        let mut builder = Builder {
            rows: matrix.rows(),
            labels: matrix.labels(),
            n_classes,
            params: *params,
            sampling,
            rng,
            nodes: Vec::new(),
        };
        builder.grow(samples.to_vec(), 0);
        DecisionTree { nodes: builder.nodes, n_classes }
    }

    fn leaf(&self, x: &SparseVector) -> &[usize] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => return counts,
                Node::Split { feature, threshold, left, right } => {
                    at = if x.get(*feature) <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Class frequencies of the leaf reached by `x`.
    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        let counts = self.leaf(x);
        let n: usize = counts.iter().sum();
        counts.iter().map(|&c| c as f64 / n as f64).collect()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

impl Builder<'_> {
    fn grow(&mut self, samples: Vec<usize>, depth: usize) -> usize {
        let mut counts = vec![0usize; self.n_classes];
        for &s in &samples {
            counts[self.labels[s]] += 1;
        }
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = self.params.max_depth.is_some_and(|d| depth >= d);
        let split = if pure || depth_capped || samples.len() < self.params.min_samples_split {
            None
        } else {
            self.best_split(&samples, &counts)
        };
        let at = self.nodes.len();
        match split {
            None => self.nodes.push(Node::Leaf { counts }),
            Some(c) => {
                self.nodes.push(Node::Split { feature: c.feature, threshold: c.threshold, left: 0, right: 0 });
                let (left_s, right_s): (Vec<usize>, Vec<usize>) =
                    samples.iter().partition(|&&s| self.rows[s].get(c.feature) <= c.threshold);
                let left = self.grow(left_s, depth + 1);
                let right = self.grow(right_s, depth + 1);
                self.nodes[at] = Node::Split { feature: c.feature, threshold: c.threshold, left, right };
            }
        }
        at
    }

    fn best_split(&mut self, samples: &[usize], parent: &[usize]) -> Option<Candidate> {
        // (feature, value, label) for every non-zero entry in the node
        let mut entries: Vec<(usize, f64, usize)> = Vec::new();
        for &s in samples {
            let label = self.labels[s];
            entries.extend(self.rows[s].iter().map(|(j, v)| (j, v, label)));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

        let mut groups: Vec<&[(usize, f64, usize)]> = Vec::new();
        let mut start = 0;
        for i in 1..=entries.len() {
            if i == entries.len() || entries[i].0 != entries[start].0 {
                let g = &entries[start..i];
                // constant features (every sample holds the same non-zero value) cannot split
                let constant = g.len() == samples.len() && g.first().map(|e| e.1) == g.last().map(|e| e.1);
                if !constant {
                    groups.push(g);
                }
                start = i;
            }
        }
        if let FeatureSampling::Random(m) = self.sampling {
            if m < groups.len() {
                let rng = self.rng.as_mut().expect("random feature sampling needs a generator");
                let mut picked = rng.sample_indices(groups.len(), m);
                picked.sort_unstable();
                groups = picked.into_iter().map(|i| groups[i]).collect();
            }
        }

        let mut best: Option<Candidate> = None;
        for g in groups {
            if let Some(c) = self.evaluate_feature(g, samples.len(), parent) {
                if best.as_ref().is_none_or(|b| c.better_than(b)) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Best threshold for one feature. `nonzero` is sorted by value; the
    /// node's remaining samples hold an implicit 0.
    fn evaluate_feature(&self, nonzero: &[(usize, f64, usize)], n: usize, parent: &[usize]) -> Option<Candidate> {
        let feature = nonzero[0].0;
        let k = self.n_classes;
        let mut zero_counts = parent.to_vec();
        for e in nonzero {
            zero_counts[e.2] -= 1;
        }
        let n_zero = n - nonzero.len();

        // distinct value groups in ascending order, with the zero block merged in place
        let mut values: Vec<(f64, Vec<usize>, usize)> = Vec::new();
        let mut zero_inserted = n_zero == 0;
        let mut i = 0;
        while i < nonzero.len() || !zero_inserted {
            if !zero_inserted && (i == nonzero.len() || nonzero[i].1 > 0.0) {
                values.push((0.0, zero_counts.clone(), n_zero));
                zero_inserted = true;
                continue;
            }
            let v = nonzero[i].1;
            let mut counts = vec![0usize; k];
            let mut total = 0;
            while i < nonzero.len() && nonzero[i].1 == v {
                counts[nonzero[i].2] += 1;
                total += 1;
                i += 1;
            }
            values.push((v, counts, total));
        }
        if values.len() < 2 {
            return None;
        }

        let mut left = vec![0usize; k];
        let mut n_left = 0;
        let mut best: Option<Candidate> = None;
        for w in 0..values.len() - 1 {
            for (l, c) in left.iter_mut().zip(&values[w].1) {
                *l += c;
            }
            n_left += values[w].2;
            let right: Vec<usize> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
            let n_right = n - n_left;
            let impurity = (n_left as f64 * gini_of(&left, n_left) + n_right as f64 * gini_of(&right, n_right)) / n as f64;
            let (a, b) = (values[w].0, values[w + 1].0);
            let mid = a + (b - a) / 2.0;
            let threshold = if mid < b { mid } else { a };
            let cand = Candidate { impurity, feature, threshold };
            if best.as_ref().is_none_or(|bst| cand.better_than(bst)) {
                best = Some(cand);
            }
        }
        best
    }
}
