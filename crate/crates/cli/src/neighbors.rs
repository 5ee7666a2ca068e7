use std::collections::BTreeSet;
use std::fs;

use sentivec::io::read_embeddings;
use sentivec::neighbors::nearest_neighbors;
use sentivec::{Error, Result};

use crate::args::NeighborsArgs;
use crate::embed::{meta_path, OutputMeta};

fn fingerprint_of(path: &std::path::Path) -> Result<Option<String>> {
    let meta = meta_path(path);
    if !meta.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&meta).map_err(|e| Error::io(&meta, e))?;
    let parsed: OutputMeta = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: meta.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    Ok(Some(parsed.fingerprint))
}

pub fn run(args: &NeighborsArgs) -> Result<()> {
    let fingerprints = args.emb.iter().map(|p| fingerprint_of(p)).collect::<Result<Vec<_>>>()?;
    let distinct: BTreeSet<Option<&String>> = fingerprints.iter().map(Option::as_ref).collect();
    if distinct.len() > 1 {
        return Err(Error::FingerprintMismatch(
            distinct
                .into_iter()
                .map(|f| f.cloned().unwrap_or_else(|| "none".into()))
                .collect(),
        ));
    }
    for path in &args.emb {
        let (words, matrix) = read_embeddings(path)?;
        let ranked = nearest_neighbors(&words, &matrix, &args.query, args.top)?;
        if args.emb.len() > 1 {
            println!("# {}", path.display());
        }
        for (word, similarity) in ranked {
            println!("{word}\t{similarity:.6}");
        }
    }
    Ok(())
}
