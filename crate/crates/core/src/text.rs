//! Normalisation, noise stripping and tokenisation for Arabic-script text.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::corpus::Corpus;
use crate::error::PipelineError;
use crate::par;

pub const DEFAULT_PROFILE: &str = "pashto-default";

/// Inclusive code-point interval, written as `"0600-06FF"` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CodeRange {
    pub start: u32,
    pub end: u32,
}

impl CodeRange {
    pub const fn new(start: u32, end: u32) -> Self {
        CodeRange { start, end }
    }

    pub fn contains(&self, ch: char) -> bool {
        (self.start..=self.end).contains(&(ch as u32))
    }
}

impl fmt::Display for CodeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04X}-{:04X}", self.start, self.end)
    }
}

impl FromStr for CodeRange {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PipelineError::InvalidConfig(format!("bad code-point range `{s}`"));
        let (a, b) = s.split_once('-').ok_or_else(bad)?;
        let parse = |h: &str| {
            let h = h.trim().trim_start_matches("U+").trim_start_matches("u+");
            u32::from_str_radix(h, 16).map_err(|_| bad())
        };
        let range = CodeRange::new(parse(a)?, parse(b)?);
        if range.start > range.end {
            return Err(bad());
        }
        Ok(range)
    }
}

impl TryFrom<String> for CodeRange {
    type Error = PipelineError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CodeRange> for String {
    fn from(r: CodeRange) -> Self {
        r.to_string()
    }
}

/// Arabic, Arabic Supplement and Arabic Extended-A.
pub const ARABIC_SCRIPT_RANGES: [CodeRange; 3] = [
    CodeRange::new(0x0600, 0x06FF),
    CodeRange::new(0x0750, 0x077F),
    CodeRange::new(0x08A0, 0x08FF),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub strip_urls: bool,
    /// Removes every Unicode number, which covers ASCII, Arabic-Indic
    /// (U+0660..) and Extended Arabic-Indic (U+06F0..) digits.
    pub strip_digits: bool,
    /// Removes punctuation and symbol code points.
    pub strip_punctuation: bool,
    pub allowed_script_ranges: Vec<CodeRange>,
    pub lowercase_latin: bool,
    /// Tokens dropped after tokenisation. Empty by default.
    #[serde(default)]
    pub stop_words: Vec<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig::pashto_default()
    }
}

impl PipelineConfig {
    pub fn pashto_default() -> Self {
        PipelineConfig {
            strip_urls: true,
            strip_digits: true,
            strip_punctuation: true,
            allowed_script_ranges: ARABIC_SCRIPT_RANGES.to_vec(),
            lowercase_latin: true,
            stop_words: Vec::new(),
        }
    }

    pub fn profile(name: &str) -> Result<Self, PipelineError> {
        match name {
            DEFAULT_PROFILE => Ok(PipelineConfig::pashto_default()),
            other => Err(PipelineError::UnknownProfile(other.to_owned())),
        }
    }

    pub fn from_json(json: &str) -> Result<Self, PipelineError> {
        let cfg: PipelineConfig = serde_json::from_str(json)
            .map_err(|e| PipelineError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Ranges must be non-empty and pairwise disjoint.
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.allowed_script_ranges.is_empty() {
            return Err(PipelineError::InvalidConfig("allowed_script_ranges is empty".into()));
        }
        let mut ranges = self.allowed_script_ranges.clone();
        ranges.sort();
        for w in ranges.windows(2) {
            if w[1].start <= w[0].end {
                return Err(PipelineError::InvalidConfig(format!(
                    "ranges {} and {} overlap",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    fn allows(&self, ch: char) -> bool {
        self.allowed_script_ranges.iter().any(|r| r.contains(ch))
    }
}

/// Zero-width joiners and bidirectional formatting marks.
fn is_invisible_mark(ch: char) -> bool {
    matches!(ch,
        '\u{200C}' | '\u{200D}' | '\u{200E}' | '\u{200F}' | '\u{061C}' | '\u{FEFF}'
        | '\u{202A}'..='\u{202E}' | '\u{2066}'..='\u{2069}')
}

fn is_punctuation(ch: char) -> bool {
    matches!(
        ch.general_category_group(),
        GeneralCategoryGroup::Punctuation | GeneralCategoryGroup::Symbol
    )
}

fn is_number(ch: char) -> bool {
    ch.general_category_group() == GeneralCategoryGroup::Number
}

/// Basic Latin through Latin Extended-B, plus Latin Extended Additional.
fn is_latin(ch: char) -> bool {
    matches!(ch as u32, 0x41..=0x24F | 0x1E00..=0x1EFF)
}

fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Drops invisible marks, applies canonical composition (NFC), collapses
/// whitespace runs to one space and trims.
pub fn normalize_text(raw: &str) -> String {
    let visible: String = raw.chars().filter(|&c| !is_invisible_mark(c)).collect();
    let composed: String = visible.nfc().collect();
    collapse_whitespace(&composed)
}

fn url_pattern() -> &'static Regex {
    static URL: OnceLock<Regex> = OnceLock::new();
    URL.get_or_init(|| {
        Regex::new(r"(?i)(?:\b[a-z][a-z0-9+.\-]*://|\bwww\.)\S*").expect("valid url regex")
    })
}

fn filter_chars(text: &str, config: &PipelineConfig) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        let keep = if ch.is_whitespace() {
            true
        } else if is_number(ch) {
            !config.strip_digits
        } else if is_punctuation(ch) {
            !config.strip_punctuation
        } else {
            config.allows(ch)
        };
        if !keep {
            continue;
        }
        if config.lowercase_latin && is_latin(ch) && ch.is_uppercase() {
            out.extend(ch.to_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

/// Removes URLs, then every code point the config does not admit.
///
/// Removal can bring a base letter next to a combining mark, so filtering and
/// NFC are repeated until the text stops changing; this makes the step
/// idempotent.
pub fn strip_noise(text: &str, config: &PipelineConfig) -> String {
    let mut current = if config.strip_urls {
        url_pattern().replace_all(text, " ").into_owned()
    } else {
        text.to_owned()
    };
    loop {
        let next: String = filter_chars(&current, config).nfc().collect();
        if next == current {
            break;
        }
        current = next;
    }
    collapse_whitespace(&current)
}

/// Whitespace split; residual punctuation trimmed from both token ends.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.trim_matches(is_punctuation))
        .filter(|w| !w.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedDocument {
    pub id: String,
    pub tokens: Vec<String>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preprocessed {
    pub documents: Vec<TokenizedDocument>,
    pub excluded: Vec<Exclusion>,
}

/// normalize → strip → tokenize for one text, with stop words removed.
pub fn process_text(raw: &str, config: &PipelineConfig) -> Vec<String> {
    let mut tokens = tokenize(&strip_noise(&normalize_text(raw), config));
    if !config.stop_words.is_empty() {
        tokens.retain(|t| !config.stop_words.iter().any(|s| s == t));
    }
    tokens
}

/// Runs the pipeline over every document (in parallel when enabled).
/// Documents left with no tokens are excluded and reported.
pub fn preprocess(corpus: &Corpus, config: &PipelineConfig) -> Preprocessed {
    let token_lists = par::map(corpus.documents(), |d| process_text(&d.text, config));
    let mut documents = Vec::with_capacity(corpus.len());
    let mut excluded = Vec::new();
    for (doc, tokens) in corpus.documents().iter().zip(token_lists) {
        if tokens.is_empty() {
            log::warn!("document `{}` has no tokens after preprocessing; excluded", doc.id);
            excluded.push(Exclusion {
                id: doc.id.clone(),
                reason: "no tokens after preprocessing".into(),
            });
        } else {
            documents.push(TokenizedDocument {
                id: doc.id.clone(),
                tokens,
                label: doc.label.clone(),
            });
        }
    }
    Preprocessed { documents, excluded }
}
