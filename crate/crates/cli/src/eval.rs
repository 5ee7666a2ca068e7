use std::fmt::Write as _;

use serde::Serialize;

use sentivec::classify::{approx_randomization_test, CvConfig, Evaluator, FoldReport, Request, SvmConfig};
use sentivec::fingerprint::fingerprint;
use sentivec::pipeline::EmbeddingConfig;
use sentivec::text::PipelineConfig;
use sentivec::Result;

use crate::args::EvalArgs;
use crate::setup::{create_dir, embedding_config, load, variants, write_file, write_json, InputDigests};

#[derive(Serialize)]
struct EvalRun<'a> {
    command: &'static str,
    inputs: &'a InputDigests,
    pipeline: &'a PipelineConfig,
    cv: &'a CvConfig,
    cells: Vec<String>,
    iterations: usize,
}

#[derive(Serialize)]
struct CorpusSummary {
    documents: usize,
    positive: usize,
    negative: usize,
    vocabulary: usize,
}

#[derive(Serialize)]
struct GridRow {
    variant: String,
    without_3feats: Option<f64>,
    with_3feats: Option<f64>,
}

#[derive(Serialize)]
struct Comparison {
    cell: String,
    best: String,
    p_value: f64,
}

#[derive(Serialize)]
struct EvalReport<'a> {
    fingerprint: String,
    run: &'a EvalRun<'a>,
    corpus: CorpusSummary,
    grid: Vec<GridRow>,
    significance: Vec<Comparison>,
    cells: &'a [FoldReport],
}

fn cell_name(r: &FoldReport) -> String {
    Request {
        variant: r.variant.parse().expect("variant names round-trip"),
        three_feats: r.three_feats,
    }
    .name()
}

pub fn run(args: &EvalArgs) -> Result<()> {
    let loaded = load(&args.input, args.model.window)?;
    let embedding: EmbeddingConfig = embedding_config(&args.model);
    let cv = CvConfig {
        folds: args.folds,
        seed: args.model.seed,
        strict: args.strict,
        min_count: args.input.min_count,
        svm: SvmConfig {
            c: args.c,
            ..Default::default()
        },
        embedding,
    };
    let variants = variants(&args.model, &loaded.resources)?;
    let requests: Vec<Request> = variants
        .iter()
        .flat_map(|&variant| {
            args.three_feats
                .flags()
                .into_iter()
                .map(move |three_feats| Request { variant, three_feats })
        })
        .collect();
    let run = EvalRun {
        command: "eval",
        inputs: &loaded.digests,
        pipeline: &loaded.pipeline,
        cv: &cv,
        cells: requests.iter().map(Request::name).collect(),
        iterations: args.iterations,
    };
    let fp = fingerprint(&run);

    let cells = Evaluator::new(&loaded.corpus, cv.clone(), &loaded.resources)?.run(&requests)?;

    let grid: Vec<GridRow> = variants
        .iter()
        .map(|v| {
            let find = |flag: bool| {
                cells
                    .iter()
                    .find(|c| c.variant == v.to_string() && c.three_feats == flag)
                    .map(|c| c.mean_accuracy)
            };
            GridRow {
                variant: v.to_string(),
                without_3feats: find(false),
                with_3feats: find(true),
            }
        })
        .collect();

    let best = cells
        .iter()
        .reduce(|a, b| if b.mean_accuracy > a.mean_accuracy { b } else { a })
        .expect("at least one cell");
    let gold = best.gold_labels();
    let best_preds = best.predicted_labels();
    let significance = cells
        .iter()
        .filter(|c| !std::ptr::eq(*c, best))
        .map(|c| {
            Ok(Comparison {
                cell: cell_name(c),
                best: cell_name(best),
                p_value: approx_randomization_test(
                    &c.predicted_labels(),
                    &best_preds,
                    &gold,
                    args.iterations,
                    args.model.seed,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (positive, negative) = loaded.corpus.class_counts();
    let report = EvalReport {
        fingerprint: fp.clone(),
        run: &run,
        corpus: CorpusSummary {
            documents: loaded.corpus.len(),
            positive,
            negative,
            vocabulary: loaded.corpus.vocabulary.len(),
        },
        grid,
        significance,
        cells: &cells,
    };

    let text = render_grid(&report);
    create_dir(&args.out)?;
    write_json(&args.out.join("eval_report.json"), &report)?;
    write_file(&args.out.join("eval_grid.txt"), &text)?;
    write_file(&args.out.join("fingerprint.txt"), format!("{fp}\n"))?;
    print!("{text}");
    Ok(())
}

fn render_grid(report: &EvalReport) -> String {
    let cell = |v: Option<f64>| v.map_or("-".to_owned(), |a| format!("{:.2}", a * 100.0));
    let mut out = String::new();
    writeln!(out, "# fingerprint {}", report.fingerprint).unwrap();
    writeln!(out, "{:<16} {:>10} {:>10}", "variant", "-3feats", "+3feats").unwrap();
    for row in &report.grid {
        writeln!(
            out,
            "{:<16} {:>10} {:>10}",
            row.variant,
            cell(row.without_3feats),
            cell(row.with_3feats)
        )
        .unwrap();
    }
    if !report.significance.is_empty() {
        writeln!(out).unwrap();
        writeln!(out, "{:<24} {:>10}   vs {}", "cell", "p", report.significance[0].best).unwrap();
        for c in &report.significance {
            writeln!(out, "{:<24} {:>10.4}", c.cell, c.p_value).unwrap();
        }
    }
    out
}
