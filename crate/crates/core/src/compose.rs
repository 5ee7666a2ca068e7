//! Word-vector assembly and document vectors.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::read_embeddings;
use crate::polarity::{doc_three_feats, PolarityLexicon};
use crate::text::{Label, Vocabulary};

/// A word-embedding channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    #[serde(rename = "corpus-svd")]
    CorpusSvd,
    #[serde(rename = "corpus-cluster")]
    CorpusCluster,
    #[serde(rename = "dict")]
    Dict,
    #[serde(rename = "4scores")]
    FourScores,
    #[serde(rename = "external")]
    External,
}

impl Channel {
    pub const ALL: [Channel; 5] = [
        Channel::CorpusSvd,
        Channel::CorpusCluster,
        Channel::Dict,
        Channel::FourScores,
        Channel::External,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::CorpusSvd => "corpus-svd",
            Channel::CorpusCluster => "corpus-cluster",
            Channel::Dict => "dict",
            Channel::FourScores => "4scores",
            Channel::External => "external",
        }
    }

    /// Whether the channel depends on training labels.
    pub fn is_supervised(self) -> bool {
        matches!(self, Channel::Dict | Channel::FourScores)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Channel::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown channel {s:?}")))
    }
}

/// Channel order of the combined word vector: corpus, dictionary, 4-scores.
pub const CONCAT_ORDER: [Channel; 3] = [Channel::CorpusSvd, Channel::Dict, Channel::FourScores];

/// Per-channel word matrices sharing one vocabulary indexing.
#[derive(Clone, Debug, Default)]
pub struct WordEmbeddingSet {
    rows: Option<usize>,
    channels: Vec<(Channel, DMatrix<f64>)>,
}

impl WordEmbeddingSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a channel; its row count must match the others.
    pub fn insert(&mut self, channel: Channel, matrix: DMatrix<f64>) -> Result<()> {
        if let Some(rows) = self.rows {
            if rows != matrix.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: matrix.nrows(),
                });
            }
        }
        self.rows = Some(matrix.nrows());
        match self.channels.iter_mut().find(|(c, _)| *c == channel) {
            Some(slot) => slot.1 = matrix,
            None => self.channels.push((channel, matrix)),
        }
        Ok(())
    }

    pub fn get(&self, channel: Channel) -> Option<&DMatrix<f64>> {
        self.channels.iter().find(|(c, _)| *c == channel).map(|(_, m)| m)
    }

    pub fn dims(&self, channel: Channel) -> Option<usize> {
        self.get(channel).map(|m| m.ncols())
    }

    pub fn channels(&self) -> impl Iterator<Item = Channel> + '_ {
        self.channels.iter().map(|(c, _)| *c)
    }

    /// Concatenates the named channels in the given order.
    pub fn concat(&self, order: &[Channel]) -> Result<DMatrix<f64>> {
        let parts = order
            .iter()
            .map(|c| {
                self.get(*c)
                    .ok_or_else(|| Error::InvalidConfig(format!("channel {c} has not been built")))
            })
            .collect::<Result<Vec<_>>>()?;
        concat_channels(&parts)
    }
}

/// Horizontal concatenation of vocabulary-aligned matrices.
pub fn concat_channels(channels: &[&DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let Some(first) = channels.first() else {
        return Err(Error::InvalidConfig("no channels to concatenate".into()));
    };
    let rows = first.nrows();
    let mut cols = 0;
    for m in channels {
        if m.nrows() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: m.nrows(),
            });
        }
        cols += m.ncols();
    }
    let mut out = DMatrix::zeros(rows, cols);
    let mut offset = 0;
    for m in channels {
        out.view_mut((0, offset), (rows, m.ncols())).copy_from(*m);
        offset += m.ncols();
    }
    Ok(out)
}

/// How repeated tokens weigh in a document average.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    /// Every occurrence counts.
    #[default]
    Token,
    /// Each distinct word counts once.
    Type,
}

/// Mean embedding of a document's in-vocabulary tokens, optionally followed
/// by the document's (min, mean, max) polarity. Documents with no
/// in-vocabulary token average to the zero vector.
pub fn document_vector(
    doc: &[Option<usize>],
    embeddings: &DMatrix<f64>,
    three_feats: Option<&PolarityLexicon>,
    averaging: Averaging,
) -> Vec<f64> {
    let dims = embeddings.ncols();
    let mut out = vec![0.0; dims + if three_feats.is_some() { 3 } else { 0 }];
    let ids: Vec<usize> = match averaging {
        Averaging::Token => doc.iter().flatten().copied().collect(),
        Averaging::Type => doc
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    if !ids.is_empty() {
        for &id in &ids {
            for (o, v) in out.iter_mut().zip(embeddings.row(id).iter()) {
                *o += v;
            }
        }
        let n = ids.len() as f64;
        out[..dims].iter_mut().for_each(|o| *o /= n);
    }
    if let Some(lexicon) = three_feats {
        out[dims..].copy_from_slice(&doc_three_feats(doc, lexicon).as_array());
    }
    out
}

/// A document's feature vector with its identity and gold label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentFeatureVector {
    pub id: String,
    pub label: Label,
    pub values: Vec<f64>,
}

/// Aligns `(words, matrix)` to a vocabulary: missing words get zero rows and
/// words outside the vocabulary are dropped.
pub fn align_embeddings(words: &[String], matrix: &DMatrix<f64>, vocab: &Vocabulary) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(vocab.len(), matrix.ncols());
    for (r, word) in words.iter().enumerate() {
        if let Some(i) = vocab.index(word) {
            out.set_row(i, &matrix.row(r));
        }
    }
    out
}

/// Reads an embedding text file and aligns it to `vocab`.
pub fn load_external_embeddings(path: &Path, vocab: &Vocabulary) -> Result<DMatrix<f64>> {
    let (words, matrix) = read_embeddings(path)?;
    Ok(align_embeddings(&words, &matrix, vocab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarity::Provenance;

    #[test]
    fn concat_dims_and_roundtrip() {
        let a = DMatrix::from_fn(3, 200, |r, c| (r * 1000 + c) as f64);
        let b = DMatrix::from_fn(3, 200, |r, c| -((r * 1000 + c) as f64));
        let f = DMatrix::from_fn(3, 4, |r, c| (r + c) as f64 * 0.5);
        let all = concat_channels(&[&a, &b, &f]).unwrap();
        assert_eq!(all.ncols(), 404);
        assert_eq!(all.columns(0, 200), a);
        assert_eq!(all.columns(200, 200), b);
        assert_eq!(all.columns(400, 4), f);
        assert_eq!(concat_channels(&[&a]).unwrap(), a);
        let short = DMatrix::zeros(2, 4);
        assert!(concat_channels(&[&a, &short]).is_err());
    }

    #[test]
    fn embedding_set_order() {
        let mut set = WordEmbeddingSet::new();
        set.insert(Channel::FourScores, DMatrix::from_element(2, 4, 4.0))
            .unwrap();
        set.insert(Channel::CorpusSvd, DMatrix::from_element(2, 3, 1.0))
            .unwrap();
        set.insert(Channel::Dict, DMatrix::from_element(2, 2, 2.0)).unwrap();
        assert!(set.insert(Channel::External, DMatrix::zeros(5, 1)).is_err());
        let c = set.concat(&CONCAT_ORDER).unwrap();
        assert_eq!(
            c.row(0).iter().copied().collect::<Vec<_>>(),
            vec![1., 1., 1., 2., 2., 4., 4., 4., 4.]
        );
        assert!(set.concat(&[Channel::CorpusCluster]).is_err());
    }

    #[test]
    fn weighted_mean() {
        let emb = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        let v = document_vector(&[Some(0), Some(0), Some(1)], &emb, None, Averaging::Token);
        assert_eq!(v, vec![2.0 / 3.0, 1.0]);
        let t = document_vector(&[Some(0), Some(0), Some(1)], &emb, None, Averaging::Type);
        assert_eq!(t, vec![0.5, 1.5]);
        assert_eq!(
            document_vector(&[Some(1)], &emb, None, Averaging::Token),
            vec![0.0, 3.0]
        );
        assert_eq!(document_vector(&[None], &emb, None, Averaging::Token), vec![0.0, 0.0]);
    }

    #[test]
    fn three_feats_appended() {
        let emb = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        let lex = PolarityLexicon::from_scores(vec![0.5, -1.0], Provenance::default());
        let v = document_vector(&[Some(0), Some(1)], &emb, Some(&lex), Averaging::Token);
        assert_eq!(v, vec![0.5, 1.5, -1.0, -0.25, 0.5]);
        assert_eq!(document_vector(&[], &emb, Some(&lex), Averaging::Token), vec![0.0; 5]);
    }

    #[test]
    fn channel_names_roundtrip() {
        for c in Channel::ALL {
            assert_eq!(c.name().parse::<Channel>().unwrap(), c);
        }
        assert!("word2vec".parse::<Channel>().is_err());
    }
}
