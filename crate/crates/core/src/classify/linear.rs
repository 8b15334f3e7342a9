//! Linear one-vs-rest SVM (hinge loss) and multinomial logistic regression,
//! both trained by mini-batch (sub)gradient descent on
//! `(1/n) Σ ℓ(x_i, y_i) + (λ/2) ‖W‖²` (biases unregularised).

use serde::{Deserialize, Serialize};

use super::softmax;
use crate::error::TrainError;
use crate::rng::SeededRng;
use crate::vectorize::{FeatureMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearLoss {
    /// `Σ_c max(0, 1 − y_c f_c)` with `y_c = ±1` for class `c` versus the rest.
    Hinge,
    /// Softmax cross-entropy `−ln softmax(f)_y`.
    Softmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2_strength: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for LinearParams {
    fn default() -> Self {
        LinearParams { learning_rate: 0.01, epochs: 100, l2_strength: 1e-4, batch_size: 1, seed: 0 }
    }
}

pub fn hinge_loss(signed_margin: f64) -> f64 {
    (1.0 - signed_margin).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub loss: LinearLoss,
    pub dim: usize,
    pub n_classes: usize,
    /// Class-major `n_classes × dim`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Objective value and its gradient with respect to weights and biases.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearGradient {
    pub value: f64,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl LinearModel {
    pub fn zeros(loss: LinearLoss, dim: usize, n_classes: usize) -> Self {
        LinearModel { loss, dim, n_classes, weights: vec![0.0; dim * n_classes], bias: vec![0.0; n_classes] }
    }

    fn class_weights(&self, c: usize) -> &[f64] {
        &self.weights[c * self.dim..(c + 1) * self.dim]
    }

    /// `w_c · x + b_c` per class.
    pub fn margins(&self, x: &SparseVector) -> Vec<f64> {
        (0..self.n_classes).map(|c| x.dot_dense(self.class_weights(c)) + self.bias[c]).collect()
    }

    /// Margins for the SVM, probabilities for logistic regression.
    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        let m = self.margins(x);
        match self.loss {
            LinearLoss::Hinge => m,
            LinearLoss::Softmax => softmax(&m),
        }
    }

    /// Per-sample loss and `∂ℓ/∂f` for each class margin.
    fn loss_and_margin_grad(&self, x: &SparseVector, y: usize) -> (f64, Vec<f64>) {
        let f = self.margins(x);
        match self.loss {
            LinearLoss::Hinge => {
                let mut loss = 0.0;
                let mut d = vec![0.0; self.n_classes];
                for (c, fc) in f.iter().enumerate() {
                    let yc = if c == y { 1.0 } else { -1.0 };
                    let l = hinge_loss(yc * fc);
                    if l > 0.0 {
                        loss += l;
                        d[c] = -yc;
                    }
                }
                (loss, d)
            }
            LinearLoss::Softmax => {
                let p = softmax(&f);
                let max = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = max + f.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
                let mut d = p;
                d[y] -= 1.0;
                (lse - f[y], d)
            }
        }
    }

    /// Full objective over a batch, with a dense gradient.
    pub fn objective(&self, rows: &[&SparseVector], labels: &[usize], l2: f64) -> LinearGradient {
        let n = rows.len() as f64;
        let mut gw: Vec<f64> = self.weights.iter().map(|w| l2 * w).collect();
        let mut gb = vec![0.0; self.n_classes];
        let mut value = 0.5 * l2 * self.weights.iter().map(|w| w * w).sum::<f64>();
        for (x, &y) in rows.iter().zip(labels) {
            let (loss, d) = self.loss_and_margin_grad(x, y);
            value += loss / n;
            for (c, dc) in d.iter().enumerate() {
                if *dc == 0.0 {
                    continue;
                }
                gb[c] += dc / n;
                let row = &mut gw[c * self.dim..(c + 1) * self.dim];
                for (j, v) in x.iter() {
                    row[j] += dc * v / n;
                }
            }
        }
        LinearGradient { value, weights: gw, bias: gb }
    }

    /// One gradient step on the batch objective, applying the L2 term as a
    /// dense decay and the data term sparsely. Returns the batch objective.
    fn step(&mut self, rows: &[&SparseVector], labels: &[usize], params: &LinearParams) -> f64 {
        let n = rows.len() as f64;
        let lr = params.learning_rate;
        let mut value = 0.5 * params.l2_strength * self.weights.iter().map(|w| w * w).sum::<f64>();
        let per_sample: Vec<(f64, Vec<f64>)> =
            rows.iter().zip(labels).map(|(x, &y)| self.loss_and_margin_grad(x, y)).collect();
        if params.l2_strength > 0.0 {
            let decay = 1.0 - lr * params.l2_strength;
            self.weights.iter_mut().for_each(|w| *w *= decay);
        }
        for (x, (loss, d)) in rows.iter().zip(per_sample) {
            value += loss / n;
            for (c, dc) in d.iter().enumerate() {
                if *dc == 0.0 {
                    continue;
                }
                self.bias[c] -= lr * dc / n;
                let row = &mut self.weights[c * self.dim..(c + 1) * self.dim];
                for (j, v) in x.iter() {
                    row[j] -= lr * dc * v / n;
                }
            }
        }
        value
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.bias).all(|w| w.is_finite())
    }
}

/// Gradient-descent driver holding the shuffle stream across epochs.
#[derive(Debug, Clone)]
pub struct LinearTrainer {
    pub model: LinearModel,
    pub params: LinearParams,
    rng: SeededRng,
    epoch: usize,
}

impl LinearTrainer {
    pub fn new(loss: LinearLoss, dim: usize, n_classes: usize, params: LinearParams) -> Self {
        LinearTrainer {
            model: LinearModel::zeros(loss, dim, n_classes),
            rng: SeededRng::new(params.seed),
            params,
            epoch: 0,
        }
    }

    /// One shuffled pass of mini-batch steps; returns the mean batch objective.
    pub fn epoch(&mut self, matrix: &FeatureMatrix) -> Result<f64, TrainError> {
        let mut order: Vec<usize> = (0..matrix.len()).collect();
        self.rng.shuffle(&mut order);
        let bs = self.params.batch_size.max(1);
        let mut total = 0.0;
        let mut batches = 0;
        for chunk in order.chunks(bs) {
            let rows: Vec<&SparseVector> = chunk.iter().map(|&i| &matrix.rows()[i]).collect();
            let labels: Vec<usize> = chunk.iter().map(|&i| matrix.labels()[i]).collect();
            total += self.model.step(&rows, &labels, &self.params);
            batches += 1;
        }
        let epoch = self.epoch;
        self.epoch += 1;
        if !self.model.is_finite() {
            return Err(TrainError::NonFiniteUpdate { epoch });
        }
        let mean = total / batches as f64;
        if !mean.is_finite() {
            return Err(TrainError::NonFiniteLoss { epoch });
        }
        Ok(mean)
    }
}

/// One training epoch for either linear model.
pub fn linear_ovr_train_step(trainer: &mut LinearTrainer, matrix: &FeatureMatrix) -> Result<f64, TrainError> {
    trainer.epoch(matrix)
}
