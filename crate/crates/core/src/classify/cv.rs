//! Stratified k-fold cross-validation with per-fold supervised statistics.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::significance::accuracy;
use super::svm::{train_linear_svm, SvmConfig};
use crate::compose::{document_vector, Channel};
use crate::error::{Error, Result};
use crate::fingerprint::{corpus_digest, fingerprint};
use crate::pipeline::{
    build_supervised, build_unsupervised, required_channels, variant_matrix, EmbeddingConfig, Resources,
    UnsupervisedChannels, Variant,
};
use crate::polarity::PolarityLexicon;
use crate::text::{Corpus, Document, Label, Vocabulary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    /// Rebuild vocabulary and text-only channels from each fold's training
    /// documents instead of once over the whole corpus.
    pub strict: bool,
    pub min_count: usize,
    pub svm: SvmConfig,
    pub embedding: EmbeddingConfig,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            folds: 10,
            seed: 0,
            strict: false,
            min_count: 1,
            svm: SvmConfig::default(),
            embedding: EmbeddingConfig::default(),
        }
    }
}

/// One cell of an evaluation grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Request {
    pub variant: Variant,
    pub three_feats: bool,
}

impl Request {
    pub fn name(&self) -> String {
        if self.three_feats {
            format!("{}+3feats", self.variant)
        } else {
            self.variant.to_string()
        }
    }

    /// Parses `variant` or `variant+3feats`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.strip_suffix("+3feats") {
            Some(v) => Ok(Request {
                variant: v.parse()?,
                three_feats: true,
            }),
            None => Ok(Request {
                variant: s.parse()?,
                three_feats: false,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub fold: usize,
    pub label: Label,
    pub predicted: Label,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub variant: String,
    pub three_feats: bool,
    pub fingerprint: String,
    pub seed: u64,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// In corpus order.
    pub predictions: Vec<Prediction>,
}

impl FoldReport {
    pub fn predicted_labels(&self) -> Vec<Label> {
        self.predictions.iter().map(|p| p.predicted).collect()
    }

    pub fn gold_labels(&self) -> Vec<Label> {
        self.predictions.iter().map(|p| p.label).collect()
    }
}

/// Test-fold index of every document. Each class is shuffled and dealt
/// round-robin, the deal continuing across classes, so fold sizes differ by
/// at most one overall and per class.
pub fn stratified_folds(labels: &[Label], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::InvalidConfig("cross-validation needs at least 2 folds".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in [Label::Positive, Label::Negative] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < folds {
            return Err(Error::InvalidConfig(format!(
                "{folds} folds exceed the {} {} documents",
                members.len(),
                class.as_str()
            )));
        }
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(assignment)
}

/// Runs several grid cells over shared folds, sharing per-fold statistics.
pub struct Evaluator<'a> {
    corpus: &'a Corpus,
    config: CvConfig,
    resources: &'a Resources,
    assignment: Vec<usize>,
}

#[derive(Serialize)]
struct FingerprintInput<'a> {
    corpus: String,
    config: &'a CvConfig,
    variant: String,
    three_feats: bool,
    dictionary_entries: Option<usize>,
    external_words: Option<usize>,
}

struct FoldOutcome {
    /// Per request: `(document index, predicted)` for the fold's test set.
    predictions: Vec<Vec<(usize, Label)>>,
    accuracies: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(corpus: &'a Corpus, config: CvConfig, resources: &'a Resources) -> Result<Self> {
        config.embedding.validate()?;
        if corpus.is_empty() {
            return Err(Error::InvalidConfig("corpus has no documents".into()));
        }
        let (positive, negative) = corpus.class_counts();
        if positive == 0 || negative == 0 {
            return Err(Error::SingleClass { positive, negative });
        }
        let labels: Vec<Label> = corpus.documents.iter().map(|d| d.label).collect();
        let assignment = stratified_folds(&labels, config.folds, config.seed)?;
        Ok(Self {
            corpus,
            config,
            resources,
            assignment,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn config(&self) -> &CvConfig {
        &self.config
    }

    fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.corpus.len()).partition(|&i| self.assignment[i] != fold)
    }

    fn training_docs(&self, train: &[usize]) -> Vec<&'a Document> {
        train.iter().map(|&i| &self.corpus.documents[i]).collect()
    }

    fn strict_vocabulary(&self, train: &[usize]) -> Result<Vocabulary> {
        Vocabulary::build(
            train.iter().map(|&i| &self.corpus.documents[i].tokens),
            self.config.min_count,
        )
    }

    /// The polarity lexicon the given fold's model is trained with.
    pub fn fold_lexicon(&self, fold: usize) -> Result<PolarityLexicon> {
        if fold >= self.config.folds {
            return Err(Error::InvalidConfig(format!("fold {fold} out of range")));
        }
        let (train, _) = self.split(fold);
        let docs = self.training_docs(&train);
        let strict_vocab;
        let vocab = if self.config.strict {
            strict_vocab = self.strict_vocabulary(&train)?;
            &strict_vocab
        } else {
            &self.corpus.vocabulary
        };
        PolarityLexicon::build(&docs, vocab, self.config.embedding.count_mode, Some(fold))
    }

    fn fingerprint(&self, request: &Request) -> String {
        fingerprint(&FingerprintInput {
            corpus: corpus_digest(&self.corpus.documents),
            config: &self.config,
            variant: request.variant.to_string(),
            three_feats: request.three_feats,
            dictionary_entries: self.resources.dictionary.as_ref().map(|d| d.len()),
            external_words: self.resources.external.as_ref().map(|(w, _)| w.len()),
        })
    }

    pub fn run(&self, requests: &[Request]) -> Result<Vec<FoldReport>> {
        if requests.is_empty() {
            return Err(Error::InvalidConfig("no variants requested".into()));
        }
        let variants: Vec<Variant> = requests.iter().map(|r| r.variant).collect();
        let channels = required_channels(&variants);
        let global = if self.config.strict {
            None
        } else {
            let encoded = self.corpus.encoded();
            let unsup = build_unsupervised(
                &self.corpus.vocabulary,
                &encoded,
                &channels,
                &self.config.embedding,
                self.resources,
            )?;
            Some((encoded, unsup))
        };

        let outcomes = (0..self.config.folds)
            .into_par_iter()
            .map(|fold| self.run_fold(fold, requests, &channels, global.as_ref()))
            .collect::<Result<Vec<_>>>()?;

        Ok(requests
            .iter()
            .enumerate()
            .map(|(r, request)| {
                let mut predicted = vec![Label::Positive; self.corpus.len()];
                for outcome in &outcomes {
                    for &(i, p) in &outcome.predictions[r] {
                        predicted[i] = p;
                    }
                }
                let fold_accuracies: Vec<f64> = outcomes.iter().map(|o| o.accuracies[r]).collect();
                let mean_accuracy = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
                let predictions = self
                    .corpus
                    .documents
                    .iter()
                    .enumerate()
                    .map(|(i, d)| Prediction {
                        id: d.id.clone(),
                        fold: self.assignment[i],
                        label: d.label,
                        predicted: predicted[i],
                    })
                    .collect();
                FoldReport {
                    variant: request.variant.to_string(),
                    three_feats: request.three_feats,
                    fingerprint: self.fingerprint(request),
                    seed: self.config.seed,
                    fold_accuracies,
                    mean_accuracy,
                    predictions,
                }
            })
            .collect())
    }

    fn run_fold(
        &self,
        fold: usize,
        requests: &[Request],
        channels: &BTreeSet<Channel>,
        global: Option<&(Vec<Vec<Option<usize>>>, UnsupervisedChannels)>,
    ) -> Result<FoldOutcome> {
        let (train, test) = self.split(fold);
        let docs = self.training_docs(&train);
        let local;
        let (vocab, encoded, unsup) = match global {
            Some((encoded, unsup)) => (&self.corpus.vocabulary, encoded, unsup),
            None => {
                let vocab = self.strict_vocabulary(&train)?;
                let encoded: Vec<Vec<Option<usize>>> =
                    self.corpus.documents.iter().map(|d| vocab.encode(&d.tokens)).collect();
                let train_encoded: Vec<Vec<Option<usize>>> = train.iter().map(|&i| encoded[i].clone()).collect();
                let unsup =
                    build_unsupervised(&vocab, &train_encoded, channels, &self.config.embedding, self.resources)?;
                local = (vocab, encoded, unsup);
                (&local.0, &local.1, &local.2)
            }
        };
        let train_encoded: Vec<Vec<Option<usize>>> = train.iter().map(|&i| encoded[i].clone()).collect();
        let supervised = build_supervised(
            unsup,
            vocab,
            &docs,
            &train_encoded,
            channels,
            &self.config.embedding,
            Some(fold),
        )?;
        let provenance = supervised.lexicon.provenance();
        if let Some(&leak) = test
            .iter()
            .find(|&&i| provenance.training_ids.contains(&self.corpus.documents[i].id))
        {
            return Err(Error::InvalidConfig(format!(
                "fold {fold}: test document {} reached the polarity lexicon",
                self.corpus.documents[leak].id
            )));
        }

        let mut predictions = Vec::with_capacity(requests.len());
        let mut accuracies = Vec::with_capacity(requests.len());
        for request in requests {
            let matrix = variant_matrix(request.variant, unsup, &supervised)?;
            let lexicon = request.three_feats.then_some(&supervised.lexicon);
            let features = |idx: &[usize]| -> Vec<Vec<f64>> {
                idx.iter()
                    .map(|&i| document_vector(&encoded[i], &matrix, lexicon, self.config.embedding.averaging))
                    .collect()
            };
            let x_train = features(&train);
            let y_train: Vec<Label> = train.iter().map(|&i| self.corpus.documents[i].label).collect();
            let model = train_linear_svm(&x_train, &y_train, &self.config.svm)?;
            let predicted = model.predict_all(&features(&test));
            let gold: Vec<Label> = test.iter().map(|&i| self.corpus.documents[i].label).collect();
            accuracies.push(accuracy(&predicted, &gold)?);
            predictions.push(test.iter().copied().zip(predicted).collect());
        }
        Ok(FoldOutcome {
            predictions,
            accuracies,
        })
    }
}

/// Cross-validates a single grid cell.
pub fn cross_validate(
    corpus: &Corpus,
    request: Request,
    config: &CvConfig,
    resources: &Resources,
) -> Result<FoldReport> {
    let mut reports = Evaluator::new(corpus, config.clone(), resources)?.run(&[request])?;
    Ok(reports.remove(0))
}
