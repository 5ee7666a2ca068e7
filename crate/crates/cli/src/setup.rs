use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use sentivec::compose::{Channel, CONCAT_ORDER};
use sentivec::corpus_embed::FuzzyConfig;
use sentivec::io::{read_corpus, read_dictionary, read_embeddings, read_polarity_pair, read_word_list};
use sentivec::pipeline::{EmbeddingConfig, Resources, Variant};
use sentivec::text::{Corpus, PipelineConfig, TextPipeline};
use sentivec::{Error, Result};

use crate::args::{InputArgs, ModelArgs};

/// Hashes of every input file, so the fingerprint tracks content.
#[derive(Debug, Serialize)]
pub struct InputDigests {
    pub corpus: Vec<String>,
    pub dict: Option<String>,
    pub external: Option<String>,
    pub stopwords: Option<String>,
    pub multiword: Option<String>,
}

pub struct Loaded {
    pub corpus: Corpus,
    pub resources: Resources,
    pub pipeline: PipelineConfig,
    pub digests: InputDigests,
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(&Sha256::digest(&bytes)[..8]))
}

fn optional_digest(path: &Option<PathBuf>) -> Result<Option<String>> {
    path.as_deref().map(file_digest).transpose()
}

pub fn load(input: &InputArgs, window: usize) -> Result<Loaded> {
    let mut pipeline = PipelineConfig {
        window_size: window,
        min_count: input.min_count,
        lowercase: !input.no_lowercase,
        ..Default::default()
    };
    if let Some(path) = &input.stopwords {
        pipeline.stopwords = read_word_list(path)?.into_iter().collect();
    }
    if let Some(path) = &input.multiword {
        pipeline.multiword = read_word_list(path)?;
    }
    if let Some(markers) = &input.negation {
        pipeline.negation_markers = markers.iter().filter(|m| !m.is_empty()).cloned().collect();
    }
    let text = TextPipeline::new(pipeline.clone())?;

    let (documents, corpus_digest) = match (&input.corpus, &input.pos_file, &input.neg_file) {
        (Some(path), _, _) => (read_corpus(path, &text)?, vec![file_digest(path)?]),
        (None, Some(pos), Some(neg)) => (
            read_polarity_pair(pos, neg, &text)?,
            vec![file_digest(pos)?, file_digest(neg)?],
        ),
        _ => {
            return Err(Error::InvalidConfig(
                "pass --corpus or --pos-file with --neg-file".into(),
            ))
        }
    };
    if documents.is_empty() {
        return Err(Error::InvalidConfig("corpus has no documents".into()));
    }
    let corpus = Corpus::new(documents, input.min_count)?;

    let dictionary = input.dict.as_deref().map(|p| read_dictionary(p, &text)).transpose()?;
    let external = input.external_emb.as_deref().map(read_embeddings).transpose()?;
    Ok(Loaded {
        corpus,
        resources: Resources { dictionary, external },
        pipeline,
        digests: InputDigests {
            corpus: corpus_digest,
            dict: optional_digest(&input.dict)?,
            external: optional_digest(&input.external_emb)?,
            stopwords: optional_digest(&input.stopwords)?,
            multiword: optional_digest(&input.multiword)?,
        },
    })
}

pub fn embedding_config(model: &ModelArgs) -> EmbeddingConfig {
    EmbeddingConfig {
        window_size: model.window,
        dims: model.dims,
        fuzzy: FuzzyConfig {
            clusters: model.clusters,
            fuzzifier: model.fuzzifier,
            max_iter: model.max_iter,
            seed: model.seed,
            ..Default::default()
        },
        count_mode: model.count_mode.into(),
        supervision: model.supervision.into(),
        dict_reduction: model.dict_reduction.into(),
        averaging: model.averaging.into(),
    }
}

/// Requested variants. Without `--channels` every channel the inputs allow
/// is used.
pub fn variants(model: &ModelArgs, resources: &Resources) -> Result<Vec<Variant>> {
    let names: Vec<String> = match &model.channels {
        Some(list) => list
            .iter()
            .map(|s| s.trim().to_owned())
            .filter(|s| !s.is_empty())
            .collect(),
        None => {
            let mut v = vec!["corpus-svd".to_owned(), "4scores".to_owned()];
            if resources.dictionary.is_some() {
                v.extend(["dict".to_owned(), "concat".to_owned()]);
            }
            if resources.external.is_some() {
                v.push("external".to_owned());
            }
            v
        }
    };
    if names.is_empty() {
        return Err(Error::InvalidConfig(
            "select at least one channel with --channels".into(),
        ));
    }
    let mut out: Vec<Variant> = Vec::new();
    for name in names {
        let v: Variant = name.parse()?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Adds the concatenation when all of its parts were selected.
pub fn with_implied_concat(mut variants: Vec<Variant>) -> Vec<Variant> {
    let all_parts = CONCAT_ORDER
        .iter()
        .all(|c: &Channel| variants.contains(&Variant::Channel(*c)));
    if all_parts && !variants.contains(&Variant::Concat) {
        variants.push(Variant::Concat);
    }
    variants
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write_file(path, text)
}
