//! Seeded labeled corpus with planted polarity markers.
//!
//! Every document draws neutral filler words and includes each marker word
//! of its own class independently with probability `marker_rate`. Marker
//! words of both classes share their dictionary glosses, so only supervision
//! can tell them apart in the dictionary channel.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dict_embed::DefinitionLexicon;
use crate::error::{Error, Result};
use crate::text::{Document, Label};

pub const POSITIVE_MARKERS: [&str; 10] = [
    "good",
    "great",
    "excellent",
    "wonderful",
    "superb",
    "brilliant",
    "delightful",
    "amazing",
    "lovely",
    "fantastic",
];

pub const NEGATIVE_MARKERS: [&str; 10] = [
    "bad",
    "awful",
    "terrible",
    "horrible",
    "boring",
    "dreadful",
    "poor",
    "dull",
    "mediocre",
    "disappointing",
];

pub const NEUTRAL_WORDS: [&str; 30] = [
    "movie",
    "film",
    "plot",
    "actor",
    "scene",
    "story",
    "director",
    "camera",
    "music",
    "script",
    "cast",
    "role",
    "ending",
    "screen",
    "ticket",
    "popcorn",
    "theater",
    "minute",
    "hour",
    "sequel",
    "character",
    "dialogue",
    "budget",
    "studio",
    "audience",
    "critic",
    "poster",
    "trailer",
    "genre",
    "setting",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    /// Split evenly between the classes (the odd one out is negative).
    pub documents: usize,
    pub marker_rate: f64,
    pub filler_min: usize,
    pub filler_max: usize,
    pub seed: u64,
    /// Permute labels after generation, removing the signal.
    pub shuffle_labels: bool,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            documents: 500,
            marker_rate: 0.8,
            filler_min: 5,
            filler_max: 12,
            seed: 0,
            shuffle_labels: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticCorpus {
    pub documents: Vec<Document>,
    /// `(headword, definition)` pairs.
    pub dictionary: Vec<(String, String)>,
}

impl SyntheticCorpus {
    /// Corpus file lines: `<label>\t<text>`.
    pub fn corpus_lines(&self) -> Vec<String> {
        self.documents
            .iter()
            .map(|d| format!("{}\t{}", d.label, d.tokens.join(" ")))
            .collect()
    }

    pub fn dictionary_lines(&self) -> Vec<String> {
        self.dictionary.iter().map(|(h, d)| format!("{h}\t{d}")).collect()
    }

    pub fn definition_lexicon(&self) -> DefinitionLexicon {
        let mut lexicon = DefinitionLexicon::new();
        for (head, definition) in &self.dictionary {
            lexicon.insert(head.clone(), definition.split_whitespace());
        }
        lexicon
    }
}

fn markers(label: Label) -> &'static [&'static str; 10] {
    match label {
        Label::Positive => &POSITIVE_MARKERS,
        Label::Negative => &NEGATIVE_MARKERS,
    }
}

pub fn generate(config: &SyntheticConfig) -> Result<SyntheticCorpus> {
    if config.documents < 2 {
        return Err(Error::InvalidConfig(
            "synthetic corpus needs at least 2 documents".into(),
        ));
    }
    if !(0.0..=1.0).contains(&config.marker_rate) {
        return Err(Error::InvalidConfig("marker rate must lie in [0, 1]".into()));
    }
    if config.filler_min == 0 || config.filler_min > config.filler_max {
        return Err(Error::InvalidConfig(
            "filler bounds must satisfy 1 <= min <= max".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let positives = config.documents / 2;
    let mut documents = Vec::with_capacity(config.documents);
    for i in 0..config.documents {
        let label = if i < positives {
            Label::Positive
        } else {
            Label::Negative
        };
        let filler = rng.random_range(config.filler_min..=config.filler_max);
        let mut tokens: Vec<String> = (0..filler)
            .map(|_| NEUTRAL_WORDS[rng.random_range(0..NEUTRAL_WORDS.len())].to_owned())
            .collect();
        for marker in markers(label) {
            if rng.random_bool(config.marker_rate) {
                tokens.push((*marker).to_owned());
            }
        }
        tokens.shuffle(&mut rng);
        documents.push(Document {
            id: format!("syn{i}"),
            tokens,
            label,
        });
    }
    if config.shuffle_labels {
        let mut labels: Vec<Label> = documents.iter().map(|d| d.label).collect();
        labels.shuffle(&mut rng);
        for (doc, label) in documents.iter_mut().zip(labels) {
            doc.label = label;
        }
    }

    let mut dictionary = Vec::new();
    for (i, (p, n)) in POSITIVE_MARKERS.iter().zip(NEGATIVE_MARKERS.iter()).enumerate() {
        let gloss = format!("quality judgement feeling sense{i}");
        dictionary.push(((*p).to_owned(), gloss.clone()));
        dictionary.push(((*n).to_owned(), gloss));
    }
    for (i, w) in NEUTRAL_WORDS.iter().enumerate() {
        dictionary.push(((*w).to_owned(), format!("object thing kind{}", i % 5)));
    }
    Ok(SyntheticCorpus { documents, dictionary })
}
