//! Implementations checked against direct dense recomputation.

use proptest::prelude::*;

use textclf::classify::{
    train, DecisionTree, Hyperparams, Knn, KnnParams, LinearLoss, LinearModel, Mlp, ModelKind, TreeParams,
};
use textclf::classify::tree::Node;
use textclf::vectorize::{chi2_scores, FeatureMatrix, FeatureMode, SparseVector, Vectorizer, VectorizerConfig};
use textclf::SeededRng;

const TOKENS: [&str; 6] = ["الف", "ب", "پ", "ت", "ټ", "ث"];

fn small_corpus() -> impl Strategy<Value = (Vec<Vec<&'static str>>, Vec<usize>)> {
    (2usize..=5).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(prop::sample::select(TOKENS.to_vec()), 1..=10), n),
            prop::collection::vec(0usize..2, n),
        )
    })
}

proptest! {
    #[test]
    fn vectorizer_matches_nested_loops((docs, labels) in small_corpus()) {
        let n = docs.len();
        // vocabulary in first-occurrence order
        let mut vocab: Vec<&str> = Vec::new();
        for d in &docs {
            for t in d {
                if !vocab.contains(t) {
                    vocab.push(t);
                }
            }
        }
        let counts: Vec<Vec<f64>> = docs
            .iter()
            .map(|d| vocab.iter().map(|v| d.iter().filter(|t| *t == v).count() as f64).collect())
            .collect();
        let df: Vec<f64> = (0..vocab.len()).map(|j| counts.iter().filter(|r| r[j] > 0.0).count() as f64).collect();

        let uni = Vectorizer::fit(&docs, &labels, 2, VectorizerConfig { mode: FeatureMode::Unigram, min_df: 1, select_k: None }).unwrap();
        let tfidf = Vectorizer::fit(&docs, &labels, 2, VectorizerConfig { mode: FeatureMode::Tfidf, min_df: 1, select_k: None }).unwrap();
        prop_assert_eq!(uni.vocabulary.tokens().to_vec(), vocab.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        for (i, d) in docs.iter().enumerate() {
            let u = uni.transform(d).to_dense();
            let w = tfidf.transform(d).to_dense();
            for j in 0..vocab.len() {
                prop_assert!((u[j] - counts[i][j]).abs() <= 1e-12);
                let want = counts[i][j] * (n as f64 / df[j]).ln();
                prop_assert!((w[j] - want).abs() <= 1e-12);
            }
        }

        for (vec, matrix_rows) in [(&uni, counts.clone()), (&tfidf, counts.iter().map(|r| r.iter().enumerate().map(|(j, c)| c * (n as f64 / df[j]).ln()).collect()).collect())] {
            let m = vec.transform_all(&docs, &labels);
            let scores = chi2_scores(&m, 2).unwrap();
            for j in 0..vocab.len() {
                let total: f64 = matrix_rows.iter().map(|r: &Vec<f64>| r[j]).sum();
                let mut want = 0.0;
                for c in 0..2 {
                    let nc = labels.iter().filter(|&&l| l == c).count() as f64;
                    let observed: f64 = matrix_rows.iter().zip(&labels).filter(|(_, &l)| l == c).map(|(r, _)| r[j]).sum();
                    let expected = nc / n as f64 * total;
                    if expected > 0.0 {
                        want += (observed - expected).powi(2) / expected;
                    }
                }
                prop_assert!((scores[j] - want).abs() <= 1e-12, "{} vs {}", scores[j], want);
            }
        }
    }
}

fn dense_matrix() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>)> {
    (4usize..15, 1usize..5).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(prop::collection::vec(0u8..4, d), n),
            prop::collection::vec(0usize..3, n),
        )
            .prop_map(|(rows, labels)| {
                (rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect(), labels)
            })
    })
}

fn to_matrix(rows: &[Vec<f64>], labels: &[usize]) -> FeatureMatrix {
    let dim = rows[0].len();
    FeatureMatrix::new(dim, rows.iter().map(|r| SparseVector::from_dense(r)).collect(), labels.to_vec(), FeatureMode::Unigram)
}

proptest! {
    #[test]
    fn knn_matches_sorted_distances((rows, labels) in dense_matrix(), query in prop::collection::vec(0u8..4, 4), k in 1usize..4) {
        let m = to_matrix(&rows, &labels);
        let q: Vec<f64> = query.iter().take(m.dim()).map(|&v| v as f64).collect();
        let knn = Knn::fit(&m, 3, &KnnParams { k, ..Default::default() }).unwrap();
        let mut order: Vec<(f64, usize)> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum::<f64>(), i))
            .collect();
        order.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want: Vec<usize> = order.iter().take(k).map(|p| p.1).collect();
        let x = SparseVector::from_dense(&q);
        prop_assert_eq!(knn.neighbors(&x, k).unwrap(), want.clone());
        let mut votes = [0usize; 3];
        for i in want {
            votes[labels[i]] += 1;
        }
        let best = (0..3).max_by(|&a, &b| votes[a].cmp(&votes[b]).then(b.cmp(&a))).unwrap();
        prop_assert_eq!(textclf::classify::argmax(&knn.scores(&x)), best);
    }

    #[test]
    fn tree_root_split_minimises_weighted_gini((rows, labels) in dense_matrix()) {
        let m = to_matrix(&rows, &labels);
        let tree = DecisionTree::fit(&m, 3, &TreeParams::default()).unwrap();
        let n = rows.len() as f64;
        let gini = |idx: &[usize]| {
            let mut c = [0.0f64; 3];
            for &i in idx {
                c[labels[i]] += 1.0;
            }
            let t = idx.len() as f64;
            1.0 - c.iter().map(|v| (v / t).powi(2)).sum::<f64>()
        };
        let all: Vec<usize> = (0..rows.len()).collect();
        let mut best = f64::INFINITY;
        let mut candidates = Vec::new();
        for j in 0..m.dim() {
            let mut values: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            values.dedup();
            for w in values.windows(2) {
                let t = (w[0] + w[1]) / 2.0;
                let (l, r): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&i| rows[i][j] <= t);
                let imp = l.len() as f64 / n * gini(&l) + r.len() as f64 / n * gini(&r);
                best = best.min(imp);
                candidates.push((j, t, imp));
            }
        }
        match &tree.nodes[0] {
            Node::Leaf { .. } => prop_assert!(gini(&all) == 0.0 || candidates.iter().all(|c| c.2 >= gini(&all) - 1e-12)),
            Node::Split { feature, threshold, .. } => {
                let chosen = candidates.iter().find(|c| c.0 == *feature && c.1 == *threshold);
                prop_assert!(chosen.is_some(), "threshold {} on {} is not a midpoint", threshold, feature);
                prop_assert!((chosen.unwrap().2 - best).abs() <= 1e-12);
            }
        }
        // fully grown trees fit consistent training data exactly
        let preds = train(ModelKind::DecisionTree, &m, 3, &Hyperparams::default());
        if let Ok(model) = preds {
            let consistent = (0..rows.len()).all(|i| (0..rows.len()).all(|k| rows[i] != rows[k] || labels[i] == labels[k]));
            if consistent {
                prop_assert_eq!(model.predict_batch(m.rows()).unwrap(), labels.clone());
            }
        }
    }
}

/// Gradient checks at the shape 10 features × 3 classes × 8 samples.
fn rows_8x10(rng: &mut SeededRng) -> (Vec<SparseVector>, Vec<usize>) {
    let rows = (0..8)
        .map(|_| {
            let d: Vec<f64> = (0..10).map(|_| if rng.unit_f64() < 0.5 { rng.symmetric(1.5) } else { 0.0 }).collect();
            SparseVector::from_dense(&d)
        })
        .collect();
    (rows, (0..8).map(|_| rng.below(3)).collect())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
}

#[test]
fn mlp_gradient_at_reference_shape() {
    let mut rng = SeededRng::new(10);
    let mut checked = 0;
    while checked < 5 {
        let net = Mlp::init(10, 20, 3, &mut rng);
        let (rows, labels) = rows_8x10(&mut rng);
        let refs: Vec<&SparseVector> = rows.iter().collect();
        let (_, grad) = net.loss_and_gradient(&refs, &labels);
        let mut worst = 0.0f64;
        for i in 0..net.params.len() {
            let f = |d: f64| {
                let mut m = net.clone();
                m.params[i] += d;
                m.loss_and_gradient(&refs, &labels).0
            };
            worst = worst.max(rel(grad[i], (f(1e-5) - f(-1e-5)) / 2e-5));
        }
        // an instance whose perturbation crosses a ReLU kink is redrawn
        if worst < 1e-2 {
            assert!(worst < 1e-4, "mlp relative error {worst}");
            checked += 1;
        }
    }
}

#[test]
fn linear_gradients_at_reference_shape() {
    let mut rng = SeededRng::new(11);
    for loss in [LinearLoss::Softmax, LinearLoss::Hinge] {
        let mut checked = 0;
        while checked < 5 {
            let mut model = LinearModel::zeros(loss, 10, 3);
            model.weights.iter_mut().for_each(|w| *w = rng.symmetric(1.0));
            model.bias.iter_mut().for_each(|b| *b = rng.symmetric(1.0));
            let (rows, labels) = rows_8x10(&mut rng);
            let refs: Vec<&SparseVector> = rows.iter().collect();
            let near_kink = loss == LinearLoss::Hinge
                && refs.iter().zip(&labels).any(|(x, &y)| {
                    model.margins(x).iter().enumerate().any(|(c, f)| (1.0 - if c == y { *f } else { -*f }).abs() < 1e-3)
                });
            if near_kink {
                continue;
            }
            let g = model.objective(&refs, &labels, 0.01);
            for i in 0..model.weights.len() {
                let f = |d: f64| {
                    let mut m = model.clone();
                    m.weights[i] += d;
                    m.objective(&refs, &labels, 0.01).value
                };
                let numeric = (f(1e-5) - f(-1e-5)) / 2e-5;
                assert!(rel(g.weights[i], numeric) < 1e-4, "{loss:?} weight {i}");
            }
            for c in 0..3 {
                let f = |d: f64| {
                    let mut m = model.clone();
                    m.bias[c] += d;
                    m.objective(&refs, &labels, 0.01).value
                };
                assert!(rel(g.bias[c], (f(1e-5) - f(-1e-5)) / 2e-5) < 1e-4, "{loss:?} bias {c}");
            }
            checked += 1;
        }
    }
}
