use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, VectorizeError};

/// Token → dense index map with document frequencies, fitted on training
/// documents only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VocabularyFile", into = "VocabularyFile")]
pub struct Vocabulary {
    tokens: Vec<String>,
    document_frequency: Vec<usize>,
    n_train_docs: usize,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyEntry {
    token: String,
    index: usize,
    df: usize,
}

#[derive(Serialize, Deserialize)]
struct VocabularyFile {
    n_train_docs: usize,
    entries: Vec<VocabularyEntry>,
}

impl TryFrom<VocabularyFile> for Vocabulary {
    type Error = VectorizeError;

    fn try_from(file: VocabularyFile) -> Result<Self, Self::Error> {
        let bad = |m: String| VectorizeError::InvalidVocabulary(m);
        let mut entries = file.entries;
        entries.sort_by_key(|e| e.index);
        let mut tokens = Vec::with_capacity(entries.len());
        let mut document_frequency = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (expected, e) in entries.into_iter().enumerate() {
            if e.index != expected {
                return Err(bad(format!("indices are not dense at {expected}")));
            }
            if e.df == 0 || e.df > file.n_train_docs {
                return Err(bad(format!("token `{}` has df {} with n = {}", e.token, e.df, file.n_train_docs)));
            }
            if index.insert(e.token.clone(), e.index).is_some() {
                return Err(bad(format!("duplicate token `{}`", e.token)));
            }
            tokens.push(e.token);
            document_frequency.push(e.df);
        }
        Ok(Vocabulary { tokens, document_frequency, n_train_docs: file.n_train_docs, index })
    }
}

impl From<Vocabulary> for VocabularyFile {
    fn from(v: Vocabulary) -> Self {
        let entries = v
            .tokens
            .into_iter()
            .zip(v.document_frequency)
            .enumerate()
            .map(|(index, (token, df))| VocabularyEntry { token, index, df })
            .collect();
        VocabularyFile { n_train_docs: v.n_train_docs, entries }
    }
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn n_train_docs(&self) -> usize {
        self.n_train_docs
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, index: usize) -> &str {
        &self.tokens[index]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn document_frequency(&self) -> &[usize] {
        &self.document_frequency
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|source| Error::Json { context: "vocabulary".into(), source })?;
        fs::write(path, json + "\n").map_err(|source| Error::Io { path: path.to_owned(), source })
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let raw = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        serde_json::from_str(&raw)
            .map_err(|source| Error::Json { context: path.display().to_string(), source })
    }
}

/// Keeps tokens present in at least `min_df` documents (0 behaves as 1),
/// indexed in first-occurrence order.
pub fn build_vocabulary<D, T>(train_docs: &[D], min_df: usize) -> Result<Vocabulary, VectorizeError>
where
    D: AsRef<[T]>,
    T: AsRef<str>,
{
    if train_docs.is_empty() {
        return Err(VectorizeError::NoDocuments);
    }
    let min_df = min_df.max(1);
    let mut order: Vec<&str> = Vec::new();
    let mut df: HashMap<&str, usize> = HashMap::new();
    // last document that counted each token, so repeats within a document count once
    let mut last_doc: HashMap<&str, usize> = HashMap::new();
    for (d, doc) in train_docs.iter().enumerate() {
        for tok in doc.as_ref() {
            let tok = tok.as_ref();
            match last_doc.get(tok) {
                Some(&seen) if seen == d => continue,
                Some(_) => {}
                None => order.push(tok),
            }
            last_doc.insert(tok, d);
            *df.entry(tok).or_insert(0) += 1;
        }
    }
    let mut tokens = Vec::new();
    let mut document_frequency = Vec::new();
    let mut index = HashMap::new();
    for tok in order {
        let f = df[tok];
        if f >= min_df {
            index.insert(tok.to_owned(), tokens.len());
            tokens.push(tok.to_owned());
            document_frequency.push(f);
        }
    }
    if tokens.is_empty() {
        return Err(VectorizeError::EmptyVocabulary(min_df));
    }
    Ok(Vocabulary { tokens, document_frequency, n_train_docs: train_docs.len(), index })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    fn greeting_corpus() -> Vec<Vec<String>> {
        vec![toks("سهار مو په خير"), toks("خير دى وړخ مو په خير"), toks("ښه قسمت درته غواړم")]
    }

    #[test]
    fn greeting_corpus_document_frequencies() {
        let v = build_vocabulary(&greeting_corpus(), 1).unwrap();
        let i = v.index_of("خير").unwrap();
        assert_eq!(v.document_frequency()[i], 2);
        assert_eq!(v.n_train_docs(), 3);
        assert_eq!(v.len(), 10);
        assert_eq!(v.token(0), "سهار");
    }

    #[test]
    fn min_df_threshold() {
        assert!(matches!(build_vocabulary(&greeting_corpus(), 3), Err(VectorizeError::EmptyVocabulary(3))));
        let v = build_vocabulary(&greeting_corpus(), 2).unwrap();
        assert_eq!(v.tokens(), &["مو".to_string(), "په".into(), "خير".into()]);
    }

    #[test]
    fn repeated_token_single_document() {
        let v = build_vocabulary(&[toks("a b a")], 1).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.document_frequency(), &[1, 1]);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let v = build_vocabulary(&greeting_corpus(), 1).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: Vocabulary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        let bad = r#"{"n_train_docs":1,"entries":[{"token":"a","index":0,"df":2}]}"#;
        assert!(serde_json::from_str::<Vocabulary>(bad).is_err());
        let gap = r#"{"n_train_docs":1,"entries":[{"token":"a","index":1,"df":1}]}"#;
        assert!(serde_json::from_str::<Vocabulary>(gap).is_err());
    }

    #[test]
    fn empty_training_set() {
        let empty: Vec<Vec<String>> = Vec::new();
        assert!(matches!(build_vocabulary(&empty, 1), Err(VectorizeError::NoDocuments)));
    }
}
