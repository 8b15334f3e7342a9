//! Synthetic labeled corpora: each class owns a disjoint set of signature
//! pseudo-words and all classes share a pool of noise pseudo-words.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, LabelSet, DEFAULT_LABELS};
use crate::error::CorpusError;
use crate::rng::SeededRng;

const LETTERS: &[char] = &[
    'ا', 'ب', 'پ', 'ت', 'ټ', 'ث', 'ج', 'چ', 'ح', 'خ', 'څ', 'ځ', 'د', 'ډ', 'ذ', 'ر', 'ړ', 'ز', 'ژ', 'ږ', 'س', 'ش',
    'ښ', 'ص', 'ض', 'ط', 'ظ', 'ع', 'غ', 'ف', 'ق', 'ک', 'ګ', 'ل', 'م', 'ن', 'ڼ', 'و', 'ه', 'ي', 'ې', 'ی', 'ۍ',
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub classes: usize,
    pub per_class: usize,
    /// Signature words per class.
    pub signature_size: usize,
    /// Probability that a token is drawn from the shared noise pool.
    pub noise: f64,
    pub noise_vocabulary: usize,
    pub min_length: usize,
    pub max_length: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            classes: 8,
            per_class: 100,
            signature_size: 20,
            noise: 0.3,
            noise_vocabulary: 200,
            min_length: 30,
            max_length: 60,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |m: &str| Err(CorpusError::InvalidGenerator(m.to_owned()));
        if self.classes < 2 {
            return bad("synthetic corpus needs at least 2 classes");
        }
        if self.per_class == 0 || self.signature_size == 0 {
            return bad("per-class document count and signature size must be positive");
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return bad("noise rate must lie in [0, 1]");
        }
        if self.noise > 0.0 && self.noise_vocabulary == 0 {
            return bad("a positive noise rate needs a noise vocabulary");
        }
        if self.min_length == 0 || self.min_length > self.max_length {
            return bad("document length range is empty");
        }
        Ok(())
    }
}

fn labels_for(classes: usize) -> Vec<String> {
    if classes <= DEFAULT_LABELS.len() {
        DEFAULT_LABELS[..classes].iter().map(|s| s.to_string()).collect()
    } else {
        (0..classes).map(|i| format!("class-{i:02}")).collect()
    }
}

fn word(rng: &mut SeededRng) -> String {
    let len = 3 + rng.below(4);
    (0..len).map(|_| LETTERS[rng.below(LETTERS.len())]).collect()
}

fn distinct_words(rng: &mut SeededRng, seen: &mut HashSet<String>, n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w = word(rng);
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

pub fn generate(config: &SynthConfig) -> Result<Corpus, CorpusError> {
    config.validate()?;
    let labels = labels_for(config.classes);
    let mut rng = SeededRng::new(config.seed);
    let mut seen = HashSet::new();
    let signatures: Vec<Vec<String>> =
        (0..config.classes).map(|_| distinct_words(&mut rng, &mut seen, config.signature_size)).collect();
    let noise = distinct_words(&mut rng, &mut seen, config.noise_vocabulary);

    let span = config.max_length - config.min_length + 1;
    let mut documents = Vec::with_capacity(config.classes * config.per_class);
    for (c, label) in labels.iter().enumerate() {
        for i in 0..config.per_class {
            let len = config.min_length + rng.below(span);
            let tokens: Vec<&str> = (0..len)
                .map(|_| {
                    if rng.unit_f64() < config.noise {
                        noise[rng.below(noise.len())].as_str()
                    } else {
                        signatures[c][rng.below(config.signature_size)].as_str()
                    }
                })
                .collect();
            documents.push(Document {
                id: format!("{label}-{i:04}"),
                text: tokens.join(" "),
                label: label.clone(),
                source: Some("synthetic".into()),
            });
        }
    }
    Corpus::new(documents, LabelSet::new(labels)?)
}
