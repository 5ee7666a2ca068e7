use sentivec::fingerprint::fingerprint;
use sentivec::synthetic::{generate, SyntheticConfig};
use sentivec::Result;

use crate::args::SyntheticArgs;
use crate::setup::{create_dir, write_file, write_json};

fn lines(rows: Vec<String>) -> String {
    let mut text = rows.join("\n");
    text.push('\n');
    text
}

pub fn run(args: &SyntheticArgs) -> Result<()> {
    let config = SyntheticConfig {
        documents: args.docs,
        marker_rate: args.marker_rate,
        seed: args.seed,
        shuffle_labels: args.shuffle_labels,
        ..Default::default()
    };
    let corpus = generate(&config)?;
    let fp = fingerprint(&config);
    create_dir(&args.out)?;
    let corpus_path = args.out.join("corpus.tsv");
    let dict_path = args.out.join("dictionary.tsv");
    write_file(&corpus_path, lines(corpus.corpus_lines()))?;
    write_file(&dict_path, lines(corpus.dictionary_lines()))?;
    write_json(
        &args.out.join("synthetic.json"),
        &serde_json::json!({ "fingerprint": fp, "config": config }),
    )?;
    println!("{}\t{} documents", corpus_path.display(), corpus.documents.len());
    println!("{}\t{} entries", dict_path.display(), corpus.dictionary.len());
    Ok(())
}
