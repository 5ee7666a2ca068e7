use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sentivec::fingerprint::fingerprint;
use sentivec::io::{write_embeddings, write_lexicon};
use sentivec::pipeline::{build_embeddings, EmbeddingConfig};
use sentivec::text::PipelineConfig;
use sentivec::{Error, Result};

use crate::args::EmbedArgs;
use crate::setup::{
    create_dir, embedding_config, load, variants, with_implied_concat, write_file, write_json, InputDigests,
};

/// Sidecar written next to every output file.
#[derive(Debug, Serialize, Deserialize)]
pub struct OutputMeta {
    pub fingerprint: String,
    pub kind: String,
    pub name: String,
    /// Channel order of the columns.
    pub channels: Vec<String>,
    pub rows: usize,
    pub dims: usize,
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct EmbedRun<'a> {
    command: &'static str,
    inputs: &'a InputDigests,
    pipeline: &'a PipelineConfig,
    embedding: &'a EmbeddingConfig,
    variants: Vec<String>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

pub fn run(args: &EmbedArgs) -> Result<()> {
    let loaded = load(&args.input, args.model.window)?;
    let config = embedding_config(&args.model);
    let variants = with_implied_concat(variants(&args.model, &loaded.resources)?);
    let run = EmbedRun {
        command: "embed",
        inputs: &loaded.digests,
        pipeline: &loaded.pipeline,
        embedding: &config,
        variants: variants.iter().map(|v| v.to_string()).collect(),
    };
    let fp = fingerprint(&run);
    let bundle = build_embeddings(&loaded.corpus, &variants, &config, &loaded.resources)?;

    create_dir(&args.out)?;
    let words = loaded.corpus.vocabulary.words();
    for (variant, matrix) in &bundle.variants {
        let path = args.out.join(format!("{variant}.vec"));
        write_embeddings(create(&path)?, words, matrix).map_err(|e| Error::io(&path, e))?;
        write_json(
            &meta_path(&path),
            &OutputMeta {
                fingerprint: fp.clone(),
                kind: "embedding".into(),
                name: variant.to_string(),
                channels: variant.channels().iter().map(|c| c.to_string()).collect(),
                rows: matrix.nrows(),
                dims: matrix.ncols(),
            },
        )?;
        println!("{}\t{} x {}", path.display(), matrix.nrows(), matrix.ncols());
    }

    let lexicon_path = args.out.join("lexicon.tsv");
    write_lexicon(create(&lexicon_path)?, &loaded.corpus.vocabulary, &bundle.lexicon)
        .map_err(|e| Error::io(&lexicon_path, e))?;
    write_json(
        &meta_path(&lexicon_path),
        &OutputMeta {
            fingerprint: fp.clone(),
            kind: "lexicon".into(),
            name: "lexicon".into(),
            channels: Vec::new(),
            rows: bundle.lexicon.len(),
            dims: 1,
        },
    )?;
    write_json(&args.out.join("run_config.json"), &run)?;
    write_file(&args.out.join("fingerprint.txt"), format!("{fp}\n"))?;
    println!("fingerprint\t{fp}");
    Ok(())
}
