//! End-to-end channel construction over a corpus.
//!
//! Unsupervised channels (corpus SVD, corpus clustering, external vectors,
//! the Boolean definition matrix) only look at text. Supervised channels
//! (dictionary, 4-scores) also need a polarity lexicon built from a training
//! split.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::compose::{align_embeddings, concat_channels, Averaging, Channel, WordEmbeddingSet, CONCAT_ORDER};
use crate::corpus_embed::{
    corpus_cluster_embedding, corpus_svd_embedding, CooccurrenceMatrix, FuzzyConfig, DEFAULT_DIMS,
};
use crate::dict_embed::{
    apply_supervision, build_bool_matrix, reduce_dict, BooleanDefMatrix, DefinitionLexicon, DictReduction,
    SupervisionMode,
};
use crate::error::{Error, Result};
use crate::polarity::{four_scores_all, four_scores_matrix, CountMode, PolarityLexicon};
use crate::text::{Corpus, Document, Vocabulary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    /// Tokens on each side of the window center.
    pub window_size: usize,
    pub dims: usize,
    pub fuzzy: FuzzyConfig,
    pub count_mode: CountMode,
    pub supervision: SupervisionMode,
    pub dict_reduction: DictReduction,
    pub averaging: Averaging,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            window_size: 5,
            dims: DEFAULT_DIMS,
            fuzzy: FuzzyConfig::default(),
            count_mode: CountMode::default(),
            supervision: SupervisionMode::default(),
            dict_reduction: DictReduction::default(),
            averaging: Averaging::default(),
        }
    }
}

impl EmbeddingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_size == 0 {
            return Err(Error::InvalidConfig("window size must be at least 1".into()));
        }
        if self.dims == 0 {
            return Err(Error::InvalidConfig("dims must be at least 1".into()));
        }
        Ok(())
    }
}

/// Optional inputs beyond the corpus itself.
#[derive(Clone, Debug, Default)]
pub struct Resources {
    pub dictionary: Option<DefinitionLexicon>,
    /// Pre-trained vectors as `(words, matrix)`, aligned per vocabulary on use.
    pub external: Option<(Vec<String>, DMatrix<f64>)>,
}

/// A word-vector variant to evaluate: one channel or the full concatenation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Channel(Channel),
    Concat,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Channel(c) => c.name(),
            Variant::Concat => "concat",
        }
    }

    pub fn channels(self) -> Vec<Channel> {
        match self {
            Variant::Channel(c) => vec![c],
            Variant::Concat => CONCAT_ORDER.to_vec(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "concat" {
            Ok(Variant::Concat)
        } else {
            s.parse().map(Variant::Channel)
        }
    }
}

/// Channels that must be built to serve `variants`.
pub fn required_channels(variants: &[Variant]) -> BTreeSet<Channel> {
    variants.iter().flat_map(|v| v.channels()).collect()
}

/// Text-only channels over one vocabulary.
#[derive(Clone, Debug, Default)]
pub struct UnsupervisedChannels {
    pub embeddings: WordEmbeddingSet,
    pub definitions: Option<BooleanDefMatrix>,
}

pub fn build_unsupervised(
    vocab: &Vocabulary,
    encoded: &[Vec<Option<usize>>],
    channels: &BTreeSet<Channel>,
    config: &EmbeddingConfig,
    resources: &Resources,
) -> Result<UnsupervisedChannels> {
    config.validate()?;
    let mut out = UnsupervisedChannels::default();
    let needs_cooc = channels.contains(&Channel::CorpusSvd) || channels.contains(&Channel::CorpusCluster);
    if needs_cooc {
        let cooc = CooccurrenceMatrix::from_documents(encoded, vocab.len(), config.window_size);
        if channels.contains(&Channel::CorpusSvd) {
            out.embeddings
                .insert(Channel::CorpusSvd, corpus_svd_embedding(&cooc, config.dims)?)?;
        }
        if channels.contains(&Channel::CorpusCluster) {
            out.embeddings.insert(
                Channel::CorpusCluster,
                corpus_cluster_embedding(&cooc, config.dims, &config.fuzzy)?,
            )?;
        }
    }
    if channels.contains(&Channel::External) {
        let (words, matrix) = resources.external.as_ref().ok_or_else(|| {
            Error::InvalidConfig("the external channel needs an embedding file (--external-emb)".into())
        })?;
        out.embeddings
            .insert(Channel::External, align_embeddings(words, matrix, vocab))?;
    }
    if channels.contains(&Channel::Dict) {
        let dictionary = resources
            .dictionary
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("the dict channel needs a dictionary file (--dict)".into()))?;
        out.definitions = Some(build_bool_matrix(vocab, dictionary)?);
    }
    Ok(out)
}

/// Label-dependent channels built from one training split.
#[derive(Clone, Debug)]
pub struct SupervisedChannels {
    pub lexicon: PolarityLexicon,
    pub embeddings: WordEmbeddingSet,
}

/// `training` and `training_encoded` must list the same documents in the
/// same order, encoded with `vocab`.
pub fn build_supervised(
    unsupervised: &UnsupervisedChannels,
    vocab: &Vocabulary,
    training: &[&Document],
    training_encoded: &[Vec<Option<usize>>],
    channels: &BTreeSet<Channel>,
    config: &EmbeddingConfig,
    fold: Option<usize>,
) -> Result<SupervisedChannels> {
    let lexicon = PolarityLexicon::build(training, vocab, config.count_mode, fold)?;
    let mut embeddings = WordEmbeddingSet::new();
    if channels.contains(&Channel::FourScores) {
        let scores = four_scores_all(training_encoded, config.window_size, &lexicon);
        embeddings.insert(Channel::FourScores, four_scores_matrix(&scores))?;
    }
    if channels.contains(&Channel::Dict) {
        let definitions = unsupervised
            .definitions
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("definition matrix has not been built".into()))?;
        let supervised = apply_supervision(definitions, &lexicon, config.supervision)?;
        let reduced = reduce_dict(&supervised, config.dict_reduction, config.dims, &config.fuzzy)?;
        embeddings.insert(Channel::Dict, reduced)?;
    }
    Ok(SupervisedChannels { lexicon, embeddings })
}

/// Looks a channel up in the supervised set first, then the unsupervised one.
pub fn channel_matrix<'a>(
    channel: Channel,
    unsupervised: &'a UnsupervisedChannels,
    supervised: &'a SupervisedChannels,
) -> Result<&'a DMatrix<f64>> {
    supervised
        .embeddings
        .get(channel)
        .or_else(|| unsupervised.embeddings.get(channel))
        .ok_or_else(|| Error::InvalidConfig(format!("channel {channel} has not been built")))
}

/// Word matrix of a variant.
pub fn variant_matrix<'a>(
    variant: Variant,
    unsupervised: &'a UnsupervisedChannels,
    supervised: &'a SupervisedChannels,
) -> Result<Cow<'a, DMatrix<f64>>> {
    match variant {
        Variant::Channel(c) => channel_matrix(c, unsupervised, supervised).map(Cow::Borrowed),
        Variant::Concat => {
            let parts = CONCAT_ORDER
                .iter()
                .map(|c| channel_matrix(*c, unsupervised, supervised))
                .collect::<Result<Vec<_>>>()?;
            concat_channels(&parts).map(Cow::Owned)
        }
    }
}

/// Every requested variant built on the whole corpus, supervised channels
/// using all labels.
#[derive(Clone, Debug)]
pub struct EmbeddingBundle {
    pub lexicon: PolarityLexicon,
    pub variants: Vec<(Variant, DMatrix<f64>)>,
}

pub fn build_embeddings(
    corpus: &Corpus,
    variants: &[Variant],
    config: &EmbeddingConfig,
    resources: &Resources,
) -> Result<EmbeddingBundle> {
    let channels = required_channels(variants);
    let encoded = corpus.encoded();
    let unsupervised = build_unsupervised(&corpus.vocabulary, &encoded, &channels, config, resources)?;
    let docs: Vec<&Document> = corpus.documents.iter().collect();
    let supervised = build_supervised(
        &unsupervised,
        &corpus.vocabulary,
        &docs,
        &encoded,
        &channels,
        config,
        None,
    )?;
    let variants = variants
        .iter()
        .map(|v| Ok((*v, variant_matrix(*v, &unsupervised, &supervised)?.into_owned())))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbeddingBundle {
        lexicon: supervised.lexicon,
        variants,
    })
}
