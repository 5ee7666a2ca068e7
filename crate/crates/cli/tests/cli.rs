use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, Output};

use sentivec::synthetic::POSITIVE_MARKERS;

fn sentivec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sentivec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = sentivec(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Every positive document holds "good great", every negative one "bad awful".
fn write_paired_corpus(path: &Path) {
    let mut text = String::new();
    for i in 0..200 {
        let (label, pair) = if i % 2 == 0 {
            ("pos", "good great")
        } else {
            ("neg", "bad awful")
        };
        let filler: Vec<String> = (0..6).map(|k| format!("w{}", (i * 7 + k * 13) % 30)).collect();
        writeln!(
            text,
            "{label}\t{} {pair} {}",
            filler[..3].join(" "),
            filler[3..].join(" ")
        )
        .unwrap();
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    let out = sentivec(&["eval", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error[usage]: "), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn cooccurring_words_rank_as_neighbors() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    write_paired_corpus(&corpus);
    let out = dir.path().join("emb");
    ok(&[
        "embed",
        "--corpus",
        p(&corpus),
        "--channels",
        "corpus-svd,corpus-cluster",
        "--dims",
        "5",
        "--clusters",
        "5",
        "--out",
        p(&out),
    ]);
    for name in ["corpus-svd", "corpus-cluster"] {
        let emb = out.join(format!("{name}.vec"));
        let listing = ok(&["neighbors", "--emb", p(&emb), "--query", "good", "--top", "3"]);
        let top: Vec<&str> = listing.lines().filter_map(|l| l.split('\t').next()).collect();
        assert_eq!(top.len(), 3);
        assert!(top.contains(&"great"), "{name}: {listing}");
    }
}

#[test]
fn embed_outputs_are_fingerprinted_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    write_paired_corpus(&corpus);
    let run = |out: &str, seed: &str| {
        let path = dir.path().join(out);
        ok(&[
            "embed",
            "--corpus",
            p(&corpus),
            "--channels",
            "corpus-cluster,4scores",
            "--dims",
            "5",
            "--clusters",
            "5",
            "--seed",
            seed,
            "--out",
            p(&path),
        ]);
        path
    };
    let (a, b, c) = (run("a", "1"), run("b", "1"), run("c", "2"));
    for file in [
        "corpus-cluster.vec",
        "4scores.vec",
        "lexicon.tsv",
        "fingerprint.txt",
        "run_config.json",
    ] {
        assert_eq!(
            std::fs::read(a.join(file)).unwrap(),
            std::fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
    let fingerprint = std::fs::read_to_string(a.join("fingerprint.txt")).unwrap();
    let meta = std::fs::read_to_string(a.join("4scores.vec.meta.json")).unwrap();
    assert!(meta.contains(fingerprint.trim()));

    let same = ok(&[
        "neighbors",
        "--emb",
        p(&a.join("4scores.vec")),
        "--emb",
        p(&b.join("4scores.vec")),
        "--query",
        "good",
    ]);
    assert_eq!(same.lines().filter(|l| l.starts_with("# ")).count(), 2);

    let mixed = sentivec(&[
        "neighbors",
        "--emb",
        p(&a.join("4scores.vec")),
        "--emb",
        p(&c.join("4scores.vec")),
        "--query",
        "good",
    ]);
    assert_eq!(mixed.status.code(), Some(1));
    assert!(
        stderr(&mixed).starts_with("error[fingerprint-mismatch]"),
        "{}",
        stderr(&mixed)
    );
}

#[test]
fn unknown_query_lists_suggestions() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    write_paired_corpus(&corpus);
    let out = dir.path().join("emb");
    ok(&[
        "embed",
        "--corpus",
        p(&corpus),
        "--channels",
        "4scores",
        "--out",
        p(&out),
    ]);
    let res = sentivec(&["neighbors", "--emb", p(&out.join("4scores.vec")), "--query", "goood"]);
    assert_eq!(res.status.code(), Some(1));
    let err = stderr(&res);
    assert!(err.starts_with("error[unknown-word]") && err.contains("good"), "{err}");
}

#[test]
fn four_scores_neighbors_share_polarity() {
    let dir = tempfile::tempdir().unwrap();
    let synth = dir.path().join("synth");
    ok(&["gen-synthetic", "--docs", "300", "--out", p(&synth)]);
    let out = dir.path().join("emb");
    ok(&[
        "embed",
        "--corpus",
        p(&synth.join("corpus.tsv")),
        "--channels",
        "4scores",
        "--out",
        p(&out),
    ]);
    let listing = ok(&[
        "neighbors",
        "--emb",
        p(&out.join("4scores.vec")),
        "--query",
        "excellent",
        "--top",
        "3",
    ]);
    for word in listing.lines().filter_map(|l| l.split('\t').next()) {
        assert!(POSITIVE_MARKERS.contains(&word), "{listing}");
    }
}

#[test]
fn empty_corpus_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.tsv");
    std::fs::write(&corpus, "").unwrap();
    let res = sentivec(&["eval", "--corpus", p(&corpus), "--out", p(&dir.path().join("o"))]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).starts_with("error["));
}

#[test]
fn eval_grid_has_both_feature_columns() {
    let dir = tempfile::tempdir().unwrap();
    let synth = dir.path().join("synth");
    ok(&["gen-synthetic", "--docs", "200", "--out", p(&synth)]);
    let out = dir.path().join("eval");
    let grid = ok(&[
        "eval",
        "--corpus",
        p(&synth.join("corpus.tsv")),
        "--channels",
        "4scores,corpus-cluster",
        "--dims",
        "10",
        "--clusters",
        "10",
        "--folds",
        "5",
        "--iterations",
        "50",
        "--out",
        p(&out),
    ]);
    assert!(grid.starts_with("# fingerprint "));
    let rows: Vec<&str> = grid
        .lines()
        .filter(|l| l.starts_with("4scores") || l.starts_with("corpus-cluster"))
        .collect();
    assert!(rows.len() >= 2, "{grid}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("eval_report.json")).unwrap()).unwrap();
    assert_eq!(report["cells"].as_array().unwrap().len(), 4);
    assert_eq!(report["significance"].as_array().unwrap().len(), 3);
}
