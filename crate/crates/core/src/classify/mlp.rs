//! One-hidden-layer perceptron: `softmax(W₂ · relu(W₁x + b₁) + b₂)`, trained
//! with per-batch backpropagation and Adam over a freshly shuffled order
//! every epoch.

use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::softmax;
use crate::error::TrainError;
use crate::rng::SeededRng;
use crate::vectorize::{FeatureMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden_units: 20,
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            epochs: 200,
            batch_size: 1,
            seed: 0,
        }
    }
}

impl MlpParams {
    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            epsilon: self.adam_epsilon,
        }
    }
}

pub fn relu(a: f64) -> f64 {
    a.max(0.0)
}

/// Subgradient used in backpropagation: 1 for `a > 0`, else 0.
pub fn relu_grad(a: f64) -> f64 {
    if a > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Network parameters in one flat buffer:
/// `W₁` (input-major, `inputs × hidden`), `b₁`, `W₂` (class-major, `outputs × hidden`), `b₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
    pub params: Vec<f64>,
}

struct Forward {
    pre: Vec<f64>,
    act: Vec<f64>,
    logits: Vec<f64>,
}

impl Mlp {
    pub fn n_params(inputs: usize, hidden: usize, outputs: usize) -> usize {
        inputs * hidden + hidden + outputs * hidden + outputs
    }

    /// He-uniform weights (`±√(6 / fan_in)`), zero biases.
    pub fn init(inputs: usize, hidden: usize, outputs: usize, rng: &mut SeededRng) -> Self {
        let mut params = vec![0.0; Self::n_params(inputs, hidden, outputs)];
        let b1 = (6.0 / inputs as f64).sqrt();
        for w in &mut params[..inputs * hidden] {
            *w = rng.symmetric(b1);
        }
        let w2_start = inputs * hidden + hidden;
        let b2 = (6.0 / hidden as f64).sqrt();
        for w in &mut params[w2_start..w2_start + outputs * hidden] {
            *w = rng.symmetric(b2);
        }
        Mlp { inputs, hidden, outputs, params }
    }

    fn offsets(&self) -> (usize, usize, usize) {
        let b1 = self.inputs * self.hidden;
        let w2 = b1 + self.hidden;
        let b2 = w2 + self.outputs * self.hidden;
        (b1, w2, b2)
    }

    fn forward(&self, x: &SparseVector) -> Forward {
        let h = self.hidden;
        let (b1, w2, b2) = self.offsets();
        let mut pre = self.params[b1..b1 + h].to_vec();
        for (j, v) in x.iter() {
            let col = &self.params[j * h..(j + 1) * h];
            for (p, w) in pre.iter_mut().zip(col) {
                *p += v * w;
            }
        }
        let act: Vec<f64> = pre.iter().map(|&a| relu(a)).collect();
        let logits = (0..self.outputs)
            .map(|k| {
                let row = &self.params[w2 + k * h..w2 + (k + 1) * h];
                self.params[b2 + k] + row.iter().zip(&act).map(|(w, a)| w * a).sum::<f64>()
            })
            .collect();
        Forward { pre, act, logits }
    }

    pub fn probabilities(&self, x: &SparseVector) -> Vec<f64> {
        softmax(&self.forward(x).logits)
    }

    /// Adds `scale · ∂ℓ/∂θ` for one sample into `grad`; returns its loss.
    fn accumulate(&self, x: &SparseVector, y: usize, scale: f64, grad: &mut [f64]) -> f64 {
        let h = self.hidden;
        let (b1, w2, b2) = self.offsets();
        let f = self.forward(x);
        let max = f.logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + f.logits.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        let loss = lse - f.logits[y];

        let mut d_out = softmax(&f.logits);
        d_out[y] -= 1.0;
        let mut d_act = vec![0.0; h];
        for (k, dk) in d_out.iter().enumerate() {
            grad[b2 + k] += scale * dk;
            let row = w2 + k * h;
            for u in 0..h {
                grad[row + u] += scale * dk * f.act[u];
                d_act[u] += dk * self.params[row + u];
            }
        }
        let d_pre: Vec<f64> = d_act.iter().zip(&f.pre).map(|(d, &a)| d * relu_grad(a)).collect();
        for u in 0..h {
            grad[b1 + u] += scale * d_pre[u];
        }
        for (j, v) in x.iter() {
            let col = &mut grad[j * h..(j + 1) * h];
            for (g, d) in col.iter_mut().zip(&d_pre) {
                *g += scale * v * d;
            }
        }
        loss
    }

    /// Mean cross-entropy over the batch and its gradient.
    pub fn loss_and_gradient(&self, rows: &[&SparseVector], labels: &[usize]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.params.len()];
        let scale = 1.0 / rows.len() as f64;
        let loss = rows.iter().zip(labels).map(|(x, &y)| self.accumulate(x, y, scale, &mut grad)).sum::<f64>();
        (loss * scale, grad)
    }
}

/// Training state that persists across epochs: network, Adam moments and
/// the shuffle stream.
#[derive(Debug, Clone)]
pub struct MlpTrainer {
    pub net: Mlp,
    pub adam: AdamState,
    pub params: MlpParams,
    rng: SeededRng,
    grad: Vec<f64>,
    epoch: usize,
}

impl MlpTrainer {
    pub fn new(inputs: usize, outputs: usize, params: MlpParams) -> Self {
        let mut rng = SeededRng::new(params.seed);
        let net = Mlp::init(inputs, params.hidden_units, outputs, &mut rng);
        let n = net.params.len();
        MlpTrainer { net, adam: AdamState::new(n), params, rng, grad: vec![0.0; n], epoch: 0 }
    }

    /// One pass over a fresh shuffle; returns the mean per-sample loss seen
    /// during the pass.
    pub fn epoch(&mut self, matrix: &FeatureMatrix) -> Result<f64, TrainError> {
        let mut order: Vec<usize> = (0..matrix.len()).collect();
        self.rng.shuffle(&mut order);
        let cfg = self.params.adam();
        let bs = self.params.batch_size.max(1);
        let mut total = 0.0;
        for chunk in order.chunks(bs) {
            self.grad.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / chunk.len() as f64;
            for &i in chunk {
                total += self.net.accumulate(&matrix.rows()[i], matrix.labels()[i], scale, &mut self.grad);
            }
            self.adam.update(&mut self.net.params, &self.grad, &cfg);
        }
        let epoch = self.epoch;
        self.epoch += 1;
        let mean = total / matrix.len() as f64;
        if !mean.is_finite() {
            return Err(TrainError::NonFiniteLoss { epoch });
        }
        if !self.net.params.iter().all(|p| p.is_finite()) {
            return Err(TrainError::NonFiniteUpdate { epoch });
        }
        Ok(mean)
    }
}

/// One MLP training epoch.
pub fn mlp_epoch(trainer: &mut MlpTrainer, matrix: &FeatureMatrix) -> Result<f64, TrainError> {
    trainer.epoch(matrix)
}
