//! Dictionary-definition embeddings.
//!
//! Each vocabulary word becomes a Boolean row over the union of definition
//! tokens. Rows are then scaled by the word's supervised polarity (raw score
//! or its sign), which pushes words with shared glosses but opposite polarity
//! to opposite sides of the space, and finally reduced by SVD or clustering.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::corpus_embed::{fuzzy_cmeans, truncated_svd, FuzzyConfig};
use crate::error::{Error, Result};
use crate::polarity::{sign_score, PolarityLexicon};
use crate::text::Vocabulary;

/// Headword to definition-token set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefinitionLexicon {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl DefinitionLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds definition tokens for a headword, merging with earlier entries.
    /// Empty token lists are ignored.
    pub fn insert<I, S>(&mut self, headword: impl Into<String>, tokens: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: BTreeSet<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return;
        }
        self.entries.entry(headword.into()).or_default().extend(tokens);
    }

    pub fn get(&self, headword: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(headword)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeSet<String>)> {
        self.entries.iter()
    }
}

/// Vocabulary-by-definition-token matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanDefMatrix {
    pub matrix: DMatrix<f64>,
    /// Column labels (definition tokens), sorted.
    pub columns: Vec<String>,
    /// False while entries are still 0/1.
    pub supervised: bool,
}

/// Entry `(w, d)` is 1 iff `d` occurs in the definition of `w`. Words without
/// a definition keep an all-zero row so the channel stays vocabulary-aligned.
pub fn build_bool_matrix(vocab: &Vocabulary, lexicon: &DefinitionLexicon) -> Result<BooleanDefMatrix> {
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let defined: Vec<Option<&BTreeSet<String>>> = vocab.words().iter().map(|w| lexicon.get(w)).collect();
    let columns: Vec<String> = defined
        .iter()
        .flatten()
        .flat_map(|set| set.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if columns.is_empty() {
        return Err(Error::InvalidConfig(
            "dictionary defines none of the vocabulary words".into(),
        ));
    }
    let column_index: BTreeMap<&str, usize> = columns.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut matrix = DMatrix::zeros(vocab.len(), columns.len());
    for (row, definition) in defined.iter().enumerate() {
        for token in definition.iter().flat_map(|set| set.iter()) {
            matrix[(row, column_index[token.as_str()])] = 1.0;
        }
    }
    Ok(BooleanDefMatrix {
        matrix,
        columns,
        supervised: false,
    })
}

/// How polarity scales a definition row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupervisionMode {
    /// Multiply by the raw log-ratio score.
    Raw,
    /// Multiply by the score's sign (+1, -1 or 0).
    #[default]
    Sign,
}

/// Scales each row by its word's polarity. The lexicon must be aligned with
/// the vocabulary the matrix was built from.
pub fn apply_supervision(
    m: &BooleanDefMatrix,
    lexicon: &PolarityLexicon,
    mode: SupervisionMode,
) -> Result<BooleanDefMatrix> {
    if lexicon.len() != m.matrix.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.matrix.nrows(),
            got: lexicon.len(),
        });
    }
    let mut matrix = m.matrix.clone();
    for (row, mut values) in matrix.row_iter_mut().enumerate() {
        let score = lexicon.score(Some(row));
        let factor = match mode {
            SupervisionMode::Raw => score,
            SupervisionMode::Sign => sign_score(score),
        };
        values *= factor;
    }
    Ok(BooleanDefMatrix {
        matrix,
        columns: m.columns.clone(),
        supervised: true,
    })
}

/// Reduction applied to the (supervised) definition matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DictReduction {
    #[default]
    Svd,
    Cluster,
}

/// `U` rows of a truncated SVD, or fuzzy c-means memberships over the rows.
pub fn reduce_dict(
    m: &BooleanDefMatrix,
    method: DictReduction,
    dims: usize,
    fuzzy: &FuzzyConfig,
) -> Result<DMatrix<f64>> {
    match method {
        DictReduction::Svd => Ok(truncated_svd(&m.matrix, dims)?.u),
        DictReduction::Cluster => {
            let config = FuzzyConfig {
                clusters: dims,
                ..*fuzzy
            };
            Ok(fuzzy_cmeans(&m.matrix, &config)?.memberships)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus_embed::cosine;
    use crate::polarity::Provenance;

    fn vocab(words: &[&str]) -> Vocabulary {
        Vocabulary::from_words(words.iter().map(|w| (w.to_string(), 1)))
    }

    fn row(m: &DMatrix<f64>, r: usize) -> Vec<f64> {
        m.row(r).iter().copied().collect()
    }

    #[test]
    fn cat_definition_row() {
        let mut lex = DefinitionLexicon::new();
        lex.insert("cat", ["small", "feline"]);
        lex.insert("dog", ["canine"]);
        let m = build_bool_matrix(&vocab(&["cat", "unknown", "dog"]), &lex).unwrap();
        assert_eq!(m.columns, vec!["canine", "feline", "small"]);
        assert_eq!(row(&m.matrix, 0), vec![0.0, 1.0, 1.0]);
        assert_eq!(row(&m.matrix, 1), vec![0.0, 0.0, 0.0]);
        assert!(!m.supervised);
    }

    #[test]
    fn duplicate_headwords_merge() {
        let mut lex = DefinitionLexicon::new();
        lex.insert("w", ["a"]);
        lex.insert("w", ["b"]);
        lex.insert("w", Vec::<String>::new());
        assert_eq!(lex.get("w").unwrap().len(), 2);
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn empty_lexicon_is_error() {
        assert!(matches!(
            build_bool_matrix(&vocab(&["a"]), &DefinitionLexicon::new()),
            Err(Error::EmptyLexicon)
        ));
        let mut lex = DefinitionLexicon::new();
        lex.insert("zzz", ["q"]);
        assert!(build_bool_matrix(&vocab(&["a"]), &lex).is_err());
    }

    #[test]
    fn supervision_flips_identical_definitions() {
        let mut lex = DefinitionLexicon::new();
        lex.insert("happy", ["feeling", "state"]);
        lex.insert("unhappy", ["feeling", "state"]);
        let v = vocab(&["happy", "unhappy"]);
        let m = build_bool_matrix(&v, &lex).unwrap();
        assert!((cosine(&row(&m.matrix, 0), &row(&m.matrix, 1)) - 1.0).abs() < 1e-12);
        let scores = PolarityLexicon::from_scores(vec![0.7, -1.3], Provenance::default());
        let s = apply_supervision(&m, &scores, SupervisionMode::Sign).unwrap();
        assert!((cosine(&row(&s.matrix, 0), &row(&s.matrix, 1)) + 1.0).abs() < 1e-12);
        assert!(s.supervised);
    }

    #[test]
    fn supervision_modes() {
        let mut lex = DefinitionLexicon::new();
        lex.insert("a", ["x", "z"]);
        lex.insert("b", ["y"]);
        let m = build_bool_matrix(&vocab(&["a", "b"]), &lex).unwrap();
        let scores = PolarityLexicon::from_scores(vec![2.0, 0.0], Provenance::default());
        let raw = apply_supervision(&m, &scores, SupervisionMode::Raw).unwrap();
        assert_eq!(row(&raw.matrix, 0), vec![2.0, 0.0, 2.0]);
        let sign = apply_supervision(&m, &scores, SupervisionMode::Sign).unwrap();
        assert_eq!(row(&sign.matrix, 1), vec![0.0, 0.0, 0.0]);
        let short = PolarityLexicon::from_scores(vec![1.0], Provenance::default());
        assert!(apply_supervision(&m, &short, SupervisionMode::Raw).is_err());
    }

    #[test]
    fn svd_reduction_preserves_equality_and_negation() {
        let mut lex = DefinitionLexicon::new();
        lex.insert("good", ["fine", "quality"]);
        lex.insert("bad", ["fine", "quality"]);
        lex.insert("great", ["fine", "quality"]);
        lex.insert("plot", ["story"]);
        let v = vocab(&["good", "bad", "great", "plot"]);
        let m = build_bool_matrix(&v, &lex).unwrap();
        let scores = PolarityLexicon::from_scores(vec![1.0, -1.0, 1.0, 0.5], Provenance::default());
        let s = apply_supervision(&m, &scores, SupervisionMode::Sign).unwrap();
        let r = reduce_dict(&s, DictReduction::Svd, 200, &FuzzyConfig::default()).unwrap();
        assert_eq!(r.ncols(), 3);
        let sv = truncated_svd(&s.matrix, 3).unwrap().singular_values;
        // Columns beyond the rank are an arbitrary basis of the null space.
        for c in (0..r.ncols()).filter(|&c| sv[c] > 1e-9) {
            assert!((r[(0, c)] - r[(2, c)]).abs() < 1e-12);
            assert!((r[(0, c)] + r[(1, c)]).abs() < 1e-12);
        }
        let clustered = reduce_dict(&s, DictReduction::Cluster, 2, &FuzzyConfig::default()).unwrap();
        assert_eq!(clustered.ncols(), 2);
        assert_eq!(row(&clustered, 0), row(&clustered, 2));
    }
}
