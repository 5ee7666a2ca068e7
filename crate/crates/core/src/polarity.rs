//! Supervised word polarity.
//!
//! A word's score is the smoothed log ratio of its relative frequency in the
//! positive training documents to its relative frequency in the negative ones:
//!
//! ```text
//! score(t) = ln( (N_t / N + 0.01) / (N'_t / N' + 0.01) )
//! ```
//!
//! Everything here is computed from a training split only. The lexicon
//! records which documents contributed so that leakage can be asserted.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{sliding_windows, Document, Label, Vocabulary};

/// Additive smoothing applied to both relative frequencies.
pub const SMOOTHING: f64 = 0.01;

/// How per-word class counts are gathered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    /// `N_t` counts occurrences of the word in the class corpus.
    #[default]
    TokenFrequency,
    /// `N_t` counts class documents that contain the word.
    DocumentFrequency,
}

/// Smoothed log-ratio polarity of one word.
///
/// `pos_count`/`pos_total` are `N_t`/`N` for the positive class,
/// `neg_count`/`neg_total` the same for the negative class.
pub fn polarity_score(pos_count: f64, pos_total: f64, neg_count: f64, neg_total: f64) -> Result<f64> {
    if pos_total <= 0.0 {
        return Err(Error::EmptyClassCorpus("positive"));
    }
    if neg_total <= 0.0 {
        return Err(Error::EmptyClassCorpus("negative"));
    }
    let pos_rate = pos_count / pos_total + SMOOTHING;
    let neg_rate = neg_count / neg_total + SMOOTHING;
    Ok((pos_rate / neg_rate).ln())
}

/// +1 for strictly positive scores, -1 for strictly negative, 0 otherwise.
pub fn sign_score(score: f64) -> f64 {
    if score > 0.0 {
        1.0
    } else if score < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Per-class word counts accumulated over a training split.
#[derive(Clone, Debug, PartialEq)]
pub struct CountStats {
    pub positive: Vec<f64>,
    pub negative: Vec<f64>,
    pub positive_total: f64,
    pub negative_total: f64,
    pub positive_docs: usize,
    pub negative_docs: usize,
}

impl CountStats {
    fn empty(vocab_len: usize) -> Self {
        Self {
            positive: vec![0.0; vocab_len],
            negative: vec![0.0; vocab_len],
            positive_total: 0.0,
            negative_total: 0.0,
            positive_docs: 0,
            negative_docs: 0,
        }
    }

    fn add_document(mut self, doc: &Document, vocab: &Vocabulary, mode: CountMode) -> Self {
        let (counts, total, docs) = match doc.label {
            Label::Positive => (&mut self.positive, &mut self.positive_total, &mut self.positive_docs),
            Label::Negative => (&mut self.negative, &mut self.negative_total, &mut self.negative_docs),
        };
        *docs += 1;
        *total += doc.tokens.len() as f64;
        match mode {
            CountMode::TokenFrequency => {
                for id in doc.tokens.iter().filter_map(|t| vocab.index(t)) {
                    counts[id] += 1.0;
                }
            }
            CountMode::DocumentFrequency => {
                let present: BTreeSet<usize> = doc.tokens.iter().filter_map(|t| vocab.index(t)).collect();
                for id in present {
                    counts[id] += 1.0;
                }
            }
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.positive.iter_mut().zip(&other.positive) {
            *a += b;
        }
        for (a, b) in self.negative.iter_mut().zip(&other.negative) {
            *a += b;
        }
        self.positive_total += other.positive_total;
        self.negative_total += other.negative_total;
        self.positive_docs += other.positive_docs;
        self.negative_docs += other.negative_docs;
        self
    }

    /// Counts over `documents`. The totals include out-of-vocabulary tokens.
    pub fn accumulate(documents: &[&Document], vocab: &Vocabulary, mode: CountMode) -> Self {
        let n = vocab.len();
        documents
            .par_iter()
            .fold(|| Self::empty(n), |acc, doc| acc.add_document(doc, vocab, mode))
            .reduce(|| Self::empty(n), Self::merge)
    }

    pub fn score(&self, word: usize) -> Result<f64> {
        polarity_score(
            self.positive[word],
            self.positive_total,
            self.negative[word],
            self.negative_total,
        )
    }
}

/// Where a lexicon's counts came from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub fold: Option<usize>,
    pub training_ids: BTreeSet<String>,
}

/// Polarity score for every vocabulary word, built from one training split.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarityLexicon {
    scores: Vec<f64>,
    provenance: Provenance,
}

impl PolarityLexicon {
    pub fn build(training: &[&Document], vocab: &Vocabulary, mode: CountMode, fold: Option<usize>) -> Result<Self> {
        let stats = CountStats::accumulate(training, vocab, mode);
        if stats.positive_docs == 0 || stats.negative_docs == 0 {
            return Err(Error::SingleClass {
                positive: stats.positive_docs,
                negative: stats.negative_docs,
            });
        }
        let scores = (0..vocab.len()).map(|w| stats.score(w)).collect::<Result<Vec<_>>>()?;
        let training_ids = training.iter().map(|d| d.id.clone()).collect();
        Ok(Self {
            scores,
            provenance: Provenance { fold, training_ids },
        })
    }

    /// Wraps precomputed scores (one per vocabulary word).
    pub fn from_scores(scores: Vec<f64>, provenance: Provenance) -> Self {
        Self { scores, provenance }
    }

    /// Score of a vocabulary index; out-of-vocabulary tokens score 0.
    pub fn score(&self, word: Option<usize>) -> f64 {
        word.and_then(|w| self.scores.get(w).copied()).unwrap_or(0.0)
    }

    pub fn score_of(&self, word: &str, vocab: &Vocabulary) -> f64 {
        self.score(vocab.index(word))
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// Self score plus min, max and mean of context-word scores.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourScores {
    pub self_score: f64,
    pub ctx_min: f64,
    pub ctx_max: f64,
    pub ctx_avg: f64,
}

impl FourScores {
    pub fn as_array(&self) -> [f64; 4] {
        [self.self_score, self.ctx_min, self.ctx_max, self.ctx_avg]
    }
}

#[derive(Clone, Copy)]
struct ContextAccumulator {
    min: f64,
    max: f64,
    sum: f64,
    count: usize,
}

impl Default for ContextAccumulator {
    fn default() -> Self {
        Self {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            sum: 0.0,
            count: 0,
        }
    }
}

impl ContextAccumulator {
    fn push(&mut self, score: f64) {
        self.min = self.min.min(score);
        self.max = self.max.max(score);
        self.sum += score;
        self.count += 1;
    }

    fn finish(&self, self_score: f64) -> FourScores {
        if self.count == 0 {
            return FourScores {
                self_score,
                ctx_min: self_score,
                ctx_max: self_score,
                ctx_avg: self_score,
            };
        }
        let avg = (self.sum / self.count as f64).clamp(self.min, self.max);
        FourScores {
            self_score,
            ctx_min: self.min,
            ctx_max: self.max,
            ctx_avg: avg,
        }
    }
}

/// Four-scores for every vocabulary word.
///
/// For each training window containing a word, the scores of every other
/// in-vocabulary token position in that window are collected. Words without
/// any context fall back to their self score.
pub fn four_scores_all(
    training: &[Vec<Option<usize>>],
    window_size: usize,
    lexicon: &PolarityLexicon,
) -> Vec<FourScores> {
    let n = lexicon.len();
    let mut acc = vec![ContextAccumulator::default(); n];
    let mut present: Vec<usize> = Vec::new();
    for doc in training {
        for window in sliding_windows(doc, window_size) {
            let span = window.slice(doc);
            present.clear();
            present.extend(span.iter().flatten().copied());
            present.sort_unstable();
            present.dedup();
            for &target in &present {
                for other in span.iter().flatten().filter(|&&o| o != target) {
                    acc[target].push(lexicon.score(Some(*other)));
                }
            }
        }
    }
    acc.iter()
        .enumerate()
        .map(|(w, a)| a.finish(lexicon.score(Some(w))))
        .collect()
}

/// Four-scores of a single word. See [`four_scores_all`].
pub fn four_scores(
    word: usize,
    training: &[Vec<Option<usize>>],
    window_size: usize,
    lexicon: &PolarityLexicon,
) -> FourScores {
    let mut acc = ContextAccumulator::default();
    for doc in training {
        for window in sliding_windows(doc, window_size) {
            let span = window.slice(doc);
            if !span.contains(&Some(word)) {
                continue;
            }
            for other in span.iter().flatten().filter(|&&o| o != word) {
                acc.push(lexicon.score(Some(*other)));
            }
        }
    }
    acc.finish(lexicon.score(Some(word)))
}

/// Stacks four-scores into a `V x 4` matrix.
pub fn four_scores_matrix(scores: &[FourScores]) -> DMatrix<f64> {
    DMatrix::from_fn(scores.len(), 4, |r, c| scores[r].as_array()[c])
}

/// Minimum, mean and maximum token polarity of a document.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeFeats {
    pub doc_min: f64,
    pub doc_mean: f64,
    pub doc_max: f64,
}

impl ThreeFeats {
    pub fn as_array(&self) -> [f64; 3] {
        [self.doc_min, self.doc_mean, self.doc_max]
    }
}

/// Min/mean/max over the scores of every token (OOV tokens score 0).
/// An empty document yields zeros.
pub fn doc_three_feats(doc: &[Option<usize>], lexicon: &PolarityLexicon) -> ThreeFeats {
    if doc.is_empty() {
        return ThreeFeats {
            doc_min: 0.0,
            doc_mean: 0.0,
            doc_max: 0.0,
        };
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &token in doc {
        let s = lexicon.score(token);
        min = min.min(s);
        max = max.max(s);
        sum += s;
    }
    ThreeFeats {
        doc_min: min,
        doc_mean: (sum / doc.len() as f64).clamp(min, max),
        doc_max: max,
    }
}
