//! Text preprocessing: tokenization, negation marking, stop-word filtering,
//! sliding windows and vocabulary construction.
//!
//! The processing order for a raw document is
//! `tokenize -> normalize -> apply_negation -> remove_stopwords`.
//! [`TextPipeline`] bundles those steps behind one call.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::error::{Error, Result};

/// Suffix appended to a token negated by a following marker.
pub const NEGATION_SUFFIX: char = '_';
/// Separator used when a multiword idiom is merged into one token.
pub const MULTIWORD_JOINER: char = '_';

/// Document polarity class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "pos")]
    Positive,
    #[serde(rename = "neg")]
    Negative,
}

impl Label {
    /// +1.0 for positive, -1.0 for negative.
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "pos",
            Label::Negative => "neg",
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "pos" | "positive" => Ok(Label::Positive),
            "neg" | "negative" => Ok(Label::Negative),
            other => Err(format!("unknown label {other:?} (expected pos or neg)")),
        }
    }
}

/// A labeled, already-processed document.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub id: String,
    pub tokens: Vec<String>,
    pub label: Label,
}

/// Hook for language-specific token normalization (deasciification,
/// morphological analysis, ...). Applied to every token after tokenization.
pub trait Normalizer: Send + Sync {
    fn normalize(&self, token: &str) -> String;
}

/// The default normalizer: returns tokens unchanged.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityNormalizer;

impl Normalizer for IdentityNormalizer {
    fn normalize(&self, token: &str) -> String {
        token.to_owned()
    }
}

/// Preprocessing configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Tokens on each side of the window center.
    pub window_size: usize,
    pub min_count: usize,
    pub lowercase: bool,
    pub stopwords: BTreeSet<String>,
    /// Emoticons (single whitespace-free strings) and idioms (two or more words).
    pub multiword: Vec<String>,
    pub negation_markers: Vec<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            window_size: 5,
            min_count: 1,
            lowercase: true,
            stopwords: BTreeSet::new(),
            multiword: Vec::new(),
            negation_markers: ["değil", "not", "no"].iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_size < 1 {
            return Err(Error::InvalidConfig("window_size must be >= 1".into()));
        }
        if self.min_count < 1 {
            return Err(Error::InvalidConfig("min_count must be >= 1".into()));
        }
        for entry in &self.multiword {
            let parts = entry.split_whitespace().count();
            if parts == 0 {
                return Err(Error::InvalidConfig("empty multiword entry".into()));
            }
            if parts == 1
                && entry
                    .trim()
                    .chars()
                    .all(|c| !is_stripped_punctuation(c) && c != '!' && c != '?')
            {
                return Err(Error::InvalidConfig(format!(
                    "multiword entry {entry:?} is neither an emoticon nor a multi-token idiom"
                )));
            }
        }
        Ok(())
    }
}

/// Punctuation that tokenization deletes. `!` and `?` are kept as tokens and
/// the underscore is a word character (negation and idiom joiner).
fn is_stripped_punctuation(c: char) -> bool {
    if c == '!' || c == '?' || c == '_' {
        return false;
    }
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    let mut current = String::new();
    for c in chunk.chars() {
        if c == '!' || c == '?' {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
            out.push(c.to_string());
        } else if !is_stripped_punctuation(c) {
            current.push(c);
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
}

/// Compiled multiword lexicon: emoticons matched against whole
/// whitespace-delimited chunks, idioms matched greedily (longest first) over
/// the token stream.
#[derive(Clone, Debug, Default)]
pub struct MultiwordLexicon {
    emoticons: HashSet<String>,
    idioms: Vec<Vec<String>>,
}

impl MultiwordLexicon {
    pub fn new(entries: &[String], lowercase: bool) -> Self {
        let mut emoticons = HashSet::new();
        let mut idioms = Vec::new();
        for entry in entries {
            let entry = if lowercase { entry.to_lowercase() } else { entry.clone() };
            let parts: Vec<&str> = entry.split_whitespace().collect();
            match parts.len() {
                0 => {}
                1 => {
                    emoticons.insert(parts[0].to_owned());
                }
                _ => {
                    let mut tokens = Vec::new();
                    for part in parts {
                        split_chunk(part, &mut tokens);
                    }
                    if tokens.len() >= 2 {
                        idioms.push(tokens);
                    }
                }
            }
        }
        // Longest idioms first so greedy matching prefers them.
        idioms.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        idioms.dedup();
        Self { emoticons, idioms }
    }

    pub fn tokenize(&self, raw: &str, lowercase: bool) -> Vec<String> {
        let text = if lowercase { raw.to_lowercase() } else { raw.to_owned() };
        let mut tokens = Vec::new();
        for chunk in text.split_whitespace() {
            if self.emoticons.contains(chunk) {
                tokens.push(chunk.to_owned());
            } else {
                split_chunk(chunk, &mut tokens);
            }
        }
        if self.idioms.is_empty() {
            return tokens;
        }
        let mut merged = Vec::with_capacity(tokens.len());
        let mut i = 0;
        while i < tokens.len() {
            let hit = self
                .idioms
                .iter()
                .find(|idiom| tokens[i..].starts_with(idiom.as_slice()));
            match hit {
                Some(idiom) => {
                    merged.push(idiom.join(&MULTIWORD_JOINER.to_string()));
                    i += idiom.len();
                }
                None => {
                    merged.push(std::mem::take(&mut tokens[i]));
                    i += 1;
                }
            }
        }
        merged
    }
}

/// Splits raw text into tokens: optional lowercasing, whitespace splitting,
/// removal of every punctuation mark except `!` and `?` (which become
/// standalone tokens) and merging of multiword lexicon entries.
pub fn tokenize(raw: &str, config: &PipelineConfig) -> Vec<String> {
    MultiwordLexicon::new(&config.multiword, config.lowercase).tokenize(raw, config.lowercase)
}

/// Marks the token preceding each negation marker with a trailing underscore
/// and drops the marker. A marker with no preceding token is dropped.
pub fn apply_negation(tokens: &[String], markers: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    for token in tokens {
        if markers.iter().any(|m| m == token) {
            if let Some(prev) = out.last_mut() {
                prev.push(NEGATION_SUFFIX);
            }
        } else {
            out.push(token.clone());
        }
    }
    out
}

/// Order-preserving exact-match filter.
pub fn remove_stopwords<S>(tokens: &[String], stopwords: &S) -> Vec<String>
where
    S: StopList + ?Sized,
{
    tokens.iter().filter(|t| !stopwords.is_stopword(t)).cloned().collect()
}

pub trait StopList {
    fn is_stopword(&self, token: &str) -> bool;
}

impl StopList for HashSet<String> {
    fn is_stopword(&self, token: &str) -> bool {
        self.contains(token)
    }
}

impl StopList for BTreeSet<String> {
    fn is_stopword(&self, token: &str) -> bool {
        self.contains(token)
    }
}

/// Full preprocessing for one configuration: tokenize, normalize, negate,
/// drop stop words.
#[derive(Clone)]
pub struct TextPipeline {
    config: PipelineConfig,
    multiword: MultiwordLexicon,
    normalizer: Arc<dyn Normalizer>,
}

impl fmt::Debug for TextPipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TextPipeline")
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl TextPipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        Self::with_normalizer(config, Arc::new(IdentityNormalizer))
    }

    pub fn with_normalizer(config: PipelineConfig, normalizer: Arc<dyn Normalizer>) -> Result<Self> {
        config.validate()?;
        let multiword = MultiwordLexicon::new(&config.multiword, config.lowercase);
        Ok(Self {
            config,
            multiword,
            normalizer,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    fn normalized(&self, raw: &str) -> Vec<String> {
        self.multiword
            .tokenize(raw, self.config.lowercase)
            .into_iter()
            .map(|t| self.normalizer.normalize(&t))
            .filter(|t| !t.is_empty())
            .collect()
    }

    /// Tokens of a corpus document.
    pub fn process(&self, raw: &str) -> Vec<String> {
        let tokens = self.normalized(raw);
        let tokens = apply_negation(&tokens, &self.config.negation_markers);
        remove_stopwords(&tokens, &self.config.stopwords)
    }

    /// Tokens of a dictionary definition (no negation handling).
    pub fn process_definition(&self, raw: &str) -> Vec<String> {
        let tokens = self.normalized(raw);
        remove_stopwords(&tokens, &self.config.stopwords)
    }
}

/// A context window: tokens `start..end` around position `center`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub center: usize,
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn slice<'a, T>(&self, tokens: &'a [T]) -> &'a [T] {
        &tokens[self.start..self.end]
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// One window per token position covering `window_size` tokens on each side,
/// truncated at the document boundaries.
pub fn sliding_windows<T>(tokens: &[T], window_size: usize) -> Vec<Window> {
    let n = tokens.len();
    (0..n)
        .map(|center| Window {
            center,
            start: center.saturating_sub(window_size),
            end: (center + window_size + 1).min(n),
        })
        .collect()
}

/// Dense word <-> index bijection with occurrence counts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<usize>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Keeps words occurring at least `min_count` times, ordered by
    /// descending count with ties broken lexicographically.
    pub fn build<'a, I, D>(documents: I, min_count: usize) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: IntoIterator<Item = &'a String>,
    {
        let mut counts: HashMap<&'a str, usize> = HashMap::new();
        for doc in documents {
            for token in doc {
                *counts.entry(token.as_str()).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<(&str, usize)> = counts.into_iter().filter(|&(_, c)| c >= min_count).collect();
        if kept.is_empty() {
            return Err(Error::EmptyVocabulary { min_count });
        }
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        Ok(Self::from_words(kept.into_iter().map(|(w, c)| (w.to_owned(), c))))
    }

    /// Builds a vocabulary from `(word, count)` pairs in the given order.
    pub fn from_words<I: IntoIterator<Item = (String, usize)>>(words: I) -> Self {
        let mut vocab = Vocabulary::default();
        for (word, count) in words {
            if vocab.index.contains_key(&word) {
                continue;
            }
            vocab.index.insert(word.clone(), vocab.words.len());
            vocab.words.push(word);
            vocab.counts.push(count);
        }
        vocab
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn count(&self, index: usize) -> usize {
        self.counts[index]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Maps tokens to vocabulary indices; out-of-vocabulary tokens become `None`.
    pub fn encode(&self, tokens: &[String]) -> Vec<Option<usize>> {
        tokens.iter().map(|t| self.index(t)).collect()
    }
}

/// Labeled documents plus the vocabulary built over all of their tokens.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub vocabulary: Vocabulary,
}

impl Corpus {
    pub fn new(documents: Vec<Document>, min_count: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate document id {:?}", doc.id)));
            }
        }
        let vocabulary = Vocabulary::build(documents.iter().map(|d| &d.tokens), min_count)?;
        Ok(Self { documents, vocabulary })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.documents.iter().filter(|d| d.label == Label::Positive).count();
        (pos, self.documents.len() - pos)
    }

    pub fn encoded(&self) -> Vec<Vec<Option<usize>>> {
        self.documents
            .iter()
            .map(|d| self.vocabulary.encode(&d.tokens))
            .collect()
    }
}
