//! Confusion matrix and per-class precision / recall / F1 with macro and
//! support-weighted aggregates.

use serde::{Deserialize, Serialize};

use crate::error::EvalError;

/// Entry `(t, p)` counts samples of true class `t` predicted as `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(truth: &[usize], preds: &[usize], k: usize) -> Result<Self, EvalError> {
        if truth.len() != preds.len() {
            return Err(EvalError::LengthMismatch { truth: truth.len(), preds: preds.len() });
        }
        if truth.is_empty() {
            return Err(EvalError::Empty);
        }
        let mut counts = vec![vec![0u64; k]; k];
        for (&t, &p) in truth.iter().zip(preds) {
            let index = t.max(p);
            if index >= k {
                return Err(EvalError::IndexOutOfRange { index, k });
            }
            counts[t][p] += 1;
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    pub fn tp(&self, i: usize) -> u64 {
        self.counts[i][i]
    }

    /// Column `i` minus the diagonal.
    pub fn fp(&self, i: usize) -> u64 {
        self.counts.iter().map(|row| row[i]).sum::<u64>() - self.tp(i)
    }

    /// Row `i` minus the diagonal.
    pub fn fn_(&self, i: usize) -> u64 {
        self.counts[i].iter().sum::<u64>() - self.tp(i)
    }

    pub fn tn(&self, i: usize) -> u64 {
        self.total() - self.tp(i) - self.fp(i) - self.fn_(i)
    }

    pub fn support(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// Set when a 0/0 ratio was defined as 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn class_metrics(cm: &ConfusionMatrix, i: usize) -> ClassMetrics {
    let tp = cm.tp(i);
    let precision = ratio(tp, tp + cm.fp(i));
    let recall = ratio(tp, tp + cm.fn_(i));
    let mut notes = Vec::new();
    if precision.is_none() {
        notes.push("never predicted: precision 0/0 set to 0");
    }
    if recall.is_none() {
        notes.push("no true samples: recall 0/0 set to 0");
    }
    let (p, r) = (precision.unwrap_or(0.0), recall.unwrap_or(0.0));
    let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
    ClassMetrics {
        precision: p,
        recall: r,
        f1,
        support: cm.support(i),
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    }
}

/// `trace / total`.
pub fn overall_accuracy(cm: &ConfusionMatrix) -> f64 {
    let total = cm.total();
    if total == 0 {
        return 0.0;
    }
    cm.trace() as f64 / total as f64
}

/// One-vs-rest accuracy of class `i`: `(TP + TN) / total`.
pub fn class_accuracy(cm: &ConfusionMatrix, i: usize) -> f64 {
    let total = cm.total();
    if total == 0 {
        return 0.0;
    }
    (cm.tp(i) + cm.tn(i)) as f64 / total as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// `(macro, weighted)`: the unweighted class mean and the support-weighted
/// mean. Classes with zero support count toward macro only.
pub fn aggregate(per_class: &[ClassMetrics]) -> (Averages, Averages) {
    let k = per_class.len().max(1) as f64;
    let mac = Averages {
        precision: per_class.iter().map(|m| m.precision).sum::<f64>() / k,
        recall: per_class.iter().map(|m| m.recall).sum::<f64>() / k,
        f1: per_class.iter().map(|m| m.f1).sum::<f64>() / k,
    };
    let total: u64 = per_class.iter().map(|m| m.support).sum();
    let weighted = if total == 0 {
        Averages { precision: 0.0, recall: 0.0, f1: 0.0 }
    } else {
        let w = |f: fn(&ClassMetrics) -> f64| {
            per_class.iter().map(|m| f(m) * m.support as f64).sum::<f64>() / total as f64
        };
        Averages { precision: w(|m| m.precision), recall: w(|m| m.recall), f1: w(|m| m.f1) }
    };
    (mac, weighted)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub labels: Vec<String>,
    pub confusion: ConfusionMatrix,
    pub per_class: Vec<ClassMetrics>,
    pub macro_avg: Averages,
    pub weighted_avg: Averages,
    pub accuracy: f64,
}

impl EvalReport {
    pub fn from_predictions(truth: &[usize], preds: &[usize], labels: &[String]) -> Result<Self, EvalError> {
        let confusion = ConfusionMatrix::new(truth, preds, labels.len())?;
        let per_class: Vec<ClassMetrics> = (0..labels.len()).map(|i| class_metrics(&confusion, i)).collect();
        let (macro_avg, weighted_avg) = aggregate(&per_class);
        let accuracy = overall_accuracy(&confusion);
        Ok(EvalReport { labels: labels.to_vec(), confusion, per_class, macro_avg, weighted_avg, accuracy })
    }
}
