//! Labeled document collections: loading, validation and stratified splits.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::rng::SeededRng;

/// One labeled raw text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// Ordered, duplicate-free class names. The position of a name is its class
/// index everywhere downstream, including for tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct LabelSet {
    names: Vec<String>,
}

pub const DEFAULT_LABELS: [&str; 8] = [
    "history",
    "technology",
    "sport",
    "cultural",
    "economic",
    "health",
    "politic",
    "scientific",
];

impl LabelSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, CorpusError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(CorpusError::InvalidLabels("label set is empty".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(CorpusError::InvalidLabels("empty label name".into()));
            }
            if !seen.insert(n.as_str()) {
                return Err(CorpusError::InvalidLabels(format!("duplicate label `{n}`")));
            }
        }
        Ok(LabelSet { names })
    }

    /// The eight-category default: history, technology, sport, cultural,
    /// economic, health, politic, scientific.
    pub fn default_categories() -> Self {
        LabelSet { names: DEFAULT_LABELS.iter().map(|s| s.to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl TryFrom<Vec<String>> for LabelSet {
    type Error = CorpusError;

    fn try_from(names: Vec<String>) -> Result<Self, Self::Error> {
        LabelSet::new(names)
    }
}

impl From<LabelSet> for Vec<String> {
    fn from(l: LabelSet) -> Self {
        l.names
    }
}

/// Documents and their label set. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
    labels: LabelSet,
    label_index: Vec<usize>,
}

impl Corpus {
    /// Validates ids (non-empty, unique) and labels (members of `labels`).
    pub fn new(documents: Vec<Document>, labels: LabelSet) -> Result<Self, CorpusError> {
        if documents.is_empty() {
            return Err(CorpusError::Empty);
        }
        let mut seen = HashSet::with_capacity(documents.len());
        let mut label_index = Vec::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            if doc.id.is_empty() {
                return Err(CorpusError::EmptyId(i + 1));
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(CorpusError::DuplicateId(doc.id.clone()));
            }
            let idx = labels.index_of(&doc.label).ok_or_else(|| CorpusError::UnknownLabel {
                id: doc.id.clone(),
                label: doc.label.clone(),
            })?;
            label_index.push(idx);
        }
        Ok(Corpus { documents, labels, label_index })
    }

    /// Builds a corpus whose label set is the sorted set of observed labels.
    pub fn with_observed_labels(documents: Vec<Document>) -> Result<Self, CorpusError> {
        if documents.is_empty() {
            return Err(CorpusError::Empty);
        }
        let observed: BTreeSet<&str> = documents.iter().map(|d| d.label.as_str()).collect();
        let labels = LabelSet::new(observed.into_iter().map(str::to_owned))?;
        Corpus::new(documents, labels)
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Class index of the document at `position`.
    pub fn label_of(&self, position: usize) -> usize {
        self.label_index[position]
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.labels.len()];
        for &l in &self.label_index {
            counts[l] += 1;
        }
        counts
    }

    /// Map from id to position in document order.
    pub fn id_positions(&self) -> HashMap<&str, usize> {
        self.documents.iter().enumerate().map(|(i, d)| (d.id.as_str(), i)).collect()
    }
}

/// Loads a corpus from a JSONL file or from a directory tree.
///
/// JSONL: one object per line with string keys `id`, `text`, `label` and an
/// optional `source`. Blank lines are skipped. Directory: one subdirectory
/// per label, one UTF-8 file per document, id = file stem.
pub fn load_corpus(path: &Path, labels: Option<LabelSet>) -> Result<Corpus, CorpusError> {
    let documents = if path.is_dir() { read_directory(path)? } else { read_jsonl(path)? };
    if documents.is_empty() {
        return Err(CorpusError::Empty);
    }
    match labels {
        Some(labels) => Corpus::new(documents, labels),
        None => Corpus::with_observed_labels(documents),
    }
}

fn read_jsonl(path: &Path) -> Result<Vec<Document>, CorpusError> {
    let raw = fs::read_to_string(path)
        .map_err(|source| CorpusError::Io { path: path.to_owned(), source })?;
    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in raw.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(line)
            .map_err(|e| CorpusError::Malformed { line: line_no, message: e.to_string() })?;
        if doc.id.is_empty() {
            return Err(CorpusError::EmptyId(line_no));
        }
        if !seen.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateId(doc.id));
        }
        documents.push(doc);
    }
    Ok(documents)
}

fn read_directory(root: &Path) -> Result<Vec<Document>, CorpusError> {
    let io = |path: &Path| {
        let path = path.to_owned();
        move |source| CorpusError::Io { path, source }
    };
    let mut label_dirs: Vec<_> = fs::read_dir(root)
        .map_err(io(root))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    label_dirs.sort();
    let mut documents = Vec::new();
    for dir in label_dirs {
        let label = dir.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let mut files: Vec<_> = fs::read_dir(&dir)
            .map_err(io(&dir))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for file in files {
            let id = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let text = fs::read_to_string(&file).map_err(io(&file))?;
            documents.push(Document { id, text, label: label.clone(), source: None });
        }
    }
    Ok(documents)
}

/// Writes the corpus as JSONL in document order.
pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let mut out = String::new();
    for doc in corpus.documents() {
        out.push_str(&serde_json::to_string(doc).expect("document serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| CorpusError::Io { path: path.to_owned(), source })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCount {
    pub label: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n_documents: usize,
    pub class_counts: Vec<ClassCount>,
    /// Ids whose text is empty after trimming whitespace.
    pub empty_after_trim: Vec<String>,
    /// max count / min count; `None` when some label has no documents.
    pub imbalance_ratio: Option<f64>,
}

pub fn validate(corpus: &Corpus) -> ValidationReport {
    let counts = corpus.class_counts();
    let class_counts = corpus
        .labels()
        .names()
        .iter()
        .zip(&counts)
        .map(|(label, &count)| ClassCount { label: label.clone(), count })
        .collect();
    let empty_after_trim = corpus
        .documents()
        .iter()
        .filter(|d| d.text.trim().is_empty())
        .map(|d| d.id.clone())
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    let min = counts.iter().copied().min().unwrap_or(0);
    let imbalance_ratio = (min > 0).then(|| max as f64 / min as f64);
    ValidationReport { n_documents: corpus.len(), class_counts, empty_after_trim, imbalance_ratio }
}

/// Train fraction and shuffle seed for a stratified split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Result<Self, CorpusError> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(CorpusError::InvalidSplit(format!(
                "train fraction {train_fraction} is not in (0, 1)"
            )));
        }
        Ok(SplitSpec { train_fraction, seed })
    }

    /// Round-half-up of `train_fraction * n`.
    pub fn train_count(&self, n: usize) -> usize {
        (self.train_fraction * n as f64 + 0.5).floor() as usize
    }
}

/// Disjoint train/test id lists covering the whole corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSplit {
    pub spec: SplitSpec,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
}

impl CorpusSplit {
    /// Checks the split against `corpus`: disjoint, covering, known ids.
    pub fn check(&self, corpus: &Corpus) -> Result<(), CorpusError> {
        let positions = corpus.id_positions();
        let mut seen = HashSet::new();
        for id in self.train_ids.iter().chain(&self.test_ids) {
            if !positions.contains_key(id.as_str()) {
                return Err(CorpusError::InvalidSplit(format!("unknown id `{id}`")));
            }
            if !seen.insert(id.as_str()) {
                return Err(CorpusError::InvalidSplit(format!("id `{id}` appears twice")));
            }
        }
        if seen.len() != corpus.len() {
            return Err(CorpusError::InvalidSplit(format!(
                "split covers {} of {} documents",
                seen.len(),
                corpus.len()
            )));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let raw = fs::read_to_string(path)
            .map_err(|source| CorpusError::Io { path: path.to_owned(), source })?;
        serde_json::from_str(&raw)
            .map_err(|e| CorpusError::Malformed { line: e.line(), message: e.to_string() })
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        let mut json = serde_json::to_string_pretty(self).expect("split serializes");
        json.push('\n');
        fs::write(path, json).map_err(|source| CorpusError::Io { path: path.to_owned(), source })
    }
}

/// Per-class stratified split.
///
/// Classes are visited in label-set order; each class's ids (in corpus order)
/// are shuffled with Fisher–Yates from one SplitMix64 stream seeded with
/// `spec.seed`, and the first `round_half_up(fraction * n_c)` go to train.
/// Both output lists are returned in corpus order.
pub fn stratified_split(corpus: &Corpus, spec: &SplitSpec) -> Result<CorpusSplit, CorpusError> {
    let spec = SplitSpec::new(spec.train_fraction, spec.seed)?;
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); corpus.labels().len()];
    for pos in 0..corpus.len() {
        by_class[corpus.label_of(pos)].push(pos);
    }
    let mut rng = SeededRng::new(spec.seed);
    let mut in_train = vec![false; corpus.len()];
    for (class, members) in by_class.iter_mut().enumerate() {
        let name = corpus.labels().name(class);
        let n = members.len();
        if n < 2 {
            return Err(CorpusError::InvalidSplit(format!(
                "class `{name}` has {n} document(s); at least 2 are required"
            )));
        }
        let n_train = spec.train_count(n);
        if n_train == 0 || n_train == n {
            return Err(CorpusError::InvalidSplit(format!(
                "fraction {} leaves an empty side for class `{name}` ({n} documents)",
                spec.train_fraction
            )));
        }
        rng.shuffle(members);
        for &pos in &members[..n_train] {
            in_train[pos] = true;
        }
    }
    let (mut train_ids, mut test_ids) = (Vec::new(), Vec::new());
    for (pos, doc) in corpus.documents().iter().enumerate() {
        if in_train[pos] {
            train_ids.push(doc.id.clone());
        } else {
            test_ids.push(doc.id.clone());
        }
    }
    Ok(CorpusSplit { spec, train_ids, test_ids })
}
