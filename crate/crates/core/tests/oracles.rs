//! Results checked against independent reference computations.

#![allow(clippy::needless_range_loop)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sentivec::classify::{approx_randomization_test, train_linear_svm, SvmConfig};
use sentivec::corpus_embed::{fuzzy_cmeans_from, random_memberships, CooccurrenceMatrix, FuzzyConfig};
use sentivec::dict_embed::{
    apply_supervision, build_bool_matrix, reduce_dict, DefinitionLexicon, DictReduction, SupervisionMode,
};
use sentivec::polarity::{polarity_score, CountMode, PolarityLexicon};
use sentivec::text::{Document, Label, Vocabulary};

fn random_doc(rng: &mut ChaCha8Rng, len: usize, vocab: usize) -> Vec<Option<usize>> {
    (0..len)
        .map(|_| {
            let w = rng.random_range(0..=vocab);
            (w < vocab).then_some(w)
        })
        .collect()
}

/// Counts, for every word pair, the window centers whose span holds both.
fn cooccurrence_by_pairs(docs: &[Vec<Option<usize>>], vocab: usize, w: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; vocab]; vocab];
    for doc in docs {
        let n = doc.len();
        for a in 0..vocab {
            for b in 0..vocab {
                for center in 0..n {
                    let lo = center.saturating_sub(w);
                    let hi = (center + w).min(n - 1);
                    let has = |x: usize| (lo..=hi).any(|p| doc[p] == Some(x));
                    if has(a) && has(b) {
                        out[a][b] += 1.0;
                    }
                }
            }
        }
    }
    out
}

#[test]
fn cooccurrence_matches_window_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let vocab = rng.random_range(1..7);
        let window = rng.random_range(1..4);
        let total = rng.random_range(0..=20);
        let mut docs = Vec::new();
        let mut left = total;
        while left > 0 {
            let len = rng.random_range(1..=left);
            docs.push(random_doc(&mut rng, len, vocab));
            left -= len;
        }
        let built = CooccurrenceMatrix::from_documents(&docs, vocab, window);
        let oracle = cooccurrence_by_pairs(&docs, vocab, window);
        for a in 0..vocab {
            for b in 0..vocab {
                assert_eq!(built.get(a, b), oracle[a][b], "({a},{b}) docs={docs:?} w={window}");
            }
        }
    }
}

#[test]
fn polarity_scores_match_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let words = ["a", "b", "c", "d", "e"];
    for _ in 0..50 {
        let docs: Vec<Document> = (0..6)
            .map(|i| Document {
                id: format!("d{i}"),
                tokens: (0..rng.random_range(1..8))
                    .map(|_| words[rng.random_range(0..words.len())].to_string())
                    .collect(),
                label: if i % 2 == 0 { Label::Positive } else { Label::Negative },
            })
            .collect();
        let vocab = Vocabulary::build(docs.iter().map(|d| &d.tokens), 1).unwrap();
        let refs: Vec<&Document> = docs.iter().collect();
        let lex = PolarityLexicon::build(&refs, &vocab, CountMode::TokenFrequency, None).unwrap();
        let count = |label: Label, w: Option<&str>| -> f64 {
            docs.iter()
                .filter(|d| d.label == label)
                .flat_map(|d| d.tokens.iter())
                .filter(|t| w.is_none_or(|w| t.as_str() == w))
                .count() as f64
        };
        let (np, nn) = (count(Label::Positive, None), count(Label::Negative, None));
        for word in vocab.words() {
            let direct = ((count(Label::Positive, Some(word)) / np + 0.01)
                / (count(Label::Negative, Some(word)) / nn + 0.01))
                .ln();
            assert!((lex.score_of(word, &vocab) - direct).abs() < 1e-12);
            let via_fn = polarity_score(
                count(Label::Positive, Some(word)),
                np,
                count(Label::Negative, Some(word)),
                nn,
            )
            .unwrap();
            assert!((via_fn - direct).abs() < 1e-12);
        }
    }
}

/// Textbook fuzzy c-means on `Vec` rows, distances (not squared) in the
/// membership ratio.
fn reference_fcm(x: &[Vec<f64>], mut u: Vec<Vec<f64>>, m: f64, max_iter: usize, eps: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let c = u[0].len();
    let dims = x[0].len();
    for _ in 0..max_iter {
        let mut centers = vec![vec![0.0; dims]; c];
        for k in 0..c {
            let weights: Vec<f64> = (0..n).map(|i| u[i][k].powf(m)).collect();
            let total: f64 = weights.iter().sum();
            for d in 0..dims {
                centers[k][d] = (0..n).map(|i| weights[i] * x[i][d]).sum::<f64>() / total;
            }
        }
        let dist = |i: usize, k: usize| -> f64 {
            x[i].iter()
                .zip(&centers[k])
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let mut next = vec![vec![0.0; c]; n];
        for i in 0..n {
            // A point sitting on centers shares full membership among them.
            let on_center: Vec<usize> = (0..c).filter(|&k| dist(i, k) == 0.0).collect();
            if !on_center.is_empty() {
                for &k in &on_center {
                    next[i][k] = 1.0 / on_center.len() as f64;
                }
                continue;
            }
            for k in 0..c {
                let dik = dist(i, k);
                next[i][k] = 1.0 / (0..c).map(|j| (dik / dist(i, j)).powf(2.0 / (m - 1.0))).sum::<f64>();
            }
        }
        let change = (0..n)
            .flat_map(|i| (0..c).map(move |k| (i, k)))
            .map(|(i, k)| (next[i][k] - u[i][k]).abs())
            .fold(0.0, f64::max);
        u = next;
        if change < eps {
            break;
        }
    }
    u
}

#[test]
fn fuzzy_cmeans_matches_reference() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let dims = rng.random_range(1..5);
        let x: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..dims).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let clusters = rng.random_range(2..5);
        let config = FuzzyConfig {
            clusters,
            seed,
            ..Default::default()
        };
        let init = random_memberships(10, clusters, seed);
        let rows = DMatrix::from_fn(10, dims, |r, c| x[r][c]);
        let ours = fuzzy_cmeans_from(&rows, &config, init.clone()).unwrap();
        let init_rows: Vec<Vec<f64>> = (0..10).map(|r| init.row(r).iter().copied().collect()).collect();
        let reference = reference_fcm(&x, init_rows, 2.0, config.max_iter, config.tolerance);
        for i in 0..10 {
            for k in 0..clusters {
                assert!(
                    (ours.memberships[(i, k)] - reference[i][k]).abs() < 1e-6,
                    "seed {seed}: ({i},{k}) {} vs {}",
                    ours.memberships[(i, k)],
                    reference[i][k]
                );
            }
        }
    }
}

fn exact_randomization_p(a: &[Label], b: &[Label], labels: &[Label]) -> f64 {
    let correct = |p: &[Label]| p.iter().zip(labels).filter(|(x, y)| x == y).count() as i64;
    let observed = (correct(a) - correct(b)).abs();
    let n = labels.len();
    let mut hits = 0u64;
    for mask in 0u32..(1 << n) {
        let (mut sa, mut sb) = (a.to_vec(), b.to_vec());
        for i in 0..n {
            if mask & (1 << i) != 0 {
                std::mem::swap(&mut sa[i], &mut sb[i]);
            }
        }
        if (correct(&sa) - correct(&sb)).abs() >= observed {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

#[test]
fn randomization_test_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.5) {
            Label::Positive
        } else {
            Label::Negative
        }
    };
    for case in 0..15 {
        let n = rng.random_range(1..=10);
        let labels: Vec<Label> = (0..n).map(|_| pick(&mut rng)).collect();
        let a: Vec<Label> = (0..n).map(|_| pick(&mut rng)).collect();
        let b: Vec<Label> = (0..n).map(|_| pick(&mut rng)).collect();
        let exact = exact_randomization_p(&a, &b, &labels);
        let approx = approx_randomization_test(&a, &b, &labels, 20_000, case).unwrap();
        assert!((approx - exact).abs() < 0.015, "case {case}: {approx} vs {exact}");
    }
}

/// Hard-margin separator found by sweeping the normal's angle.
fn reference_max_margin_angle(x: &[[f64; 2]], y: &[Label]) -> f64 {
    let steps = 200_000;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for s in 0..steps {
        let theta = s as f64 / steps as f64 * std::f64::consts::TAU;
        let (c, sn) = (theta.cos(), theta.sin());
        let proj = |p: &[f64; 2]| c * p[0] + sn * p[1];
        let low_pos = x
            .iter()
            .zip(y)
            .filter(|(_, l)| **l == Label::Positive)
            .map(|(p, _)| proj(p))
            .fold(f64::INFINITY, f64::min);
        let high_neg = x
            .iter()
            .zip(y)
            .filter(|(_, l)| **l == Label::Negative)
            .map(|(p, _)| proj(p))
            .fold(f64::NEG_INFINITY, f64::max);
        let margin = low_pos - high_neg;
        if margin > best.0 {
            best = (margin, theta);
        }
    }
    best.1
}

#[test]
fn svm_matches_reference_max_margin_direction() {
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(40 + seed);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            let label = if i < 10 { Label::Positive } else { Label::Negative };
            let center = if label == Label::Positive {
                [2.0, 1.5]
            } else {
                [-2.0, -0.5]
            };
            x.push([
                center[0] + rng.random_range(-1.0..1.0),
                center[1] + rng.random_range(-1.0..1.0),
            ]);
            y.push(label);
        }
        let rows: Vec<Vec<f64>> = x.iter().map(|p| p.to_vec()).collect();
        let model = train_linear_svm(&rows, &y, &SvmConfig::default()).unwrap();
        assert_eq!(model.predict_all(&rows), y);
        let ours = model.weights[1].atan2(model.weights[0]);
        let reference = reference_max_margin_angle(&x, &y);
        let diff = (ours - reference).rem_euclid(std::f64::consts::TAU);
        let diff = diff.min(std::f64::consts::TAU - diff);
        assert!(diff < 0.1, "seed {seed}: {ours} vs {reference}");
    }
}

#[test]
fn dictionary_svd_matches_eigendecomposition() {
    let mut lex = DefinitionLexicon::new();
    lex.insert("good", ["fine", "quality", "high"]);
    lex.insert("bad", ["fine", "quality", "low"]);
    lex.insert("nice", ["pleasant", "quality"]);
    lex.insert("plot", ["story", "sequence"]);
    lex.insert("cast", ["actors", "story"]);
    let vocab = Vocabulary::from_words(["good", "bad", "nice", "plot", "cast"].map(|w| (w.to_string(), 1)));
    let scores = PolarityLexicon::from_scores(vec![1.2, -0.8, 0.4, 0.1, -0.3], Default::default());
    let m = apply_supervision(
        &build_bool_matrix(&vocab, &lex).unwrap(),
        &scores,
        SupervisionMode::Sign,
    )
    .unwrap();
    let u = reduce_dict(&m, DictReduction::Svd, 3, &FuzzyConfig::default()).unwrap();
    let gram = &m.matrix * m.matrix.transpose();
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    for (col, &e) in order.iter().take(3).enumerate() {
        let lambda = eig.eigenvalues[e];
        assert!(lambda > 1e-9);
        let dot = u.column(col).dot(&eig.eigenvectors.column(e));
        assert!((dot.abs() - 1.0).abs() < 1e-8, "column {col}: |dot| = {}", dot.abs());
    }
}

fn shared_init_run(x: &[Vec<f64>], clusters: usize, seed: u64) -> (DMatrix<f64>, Vec<Vec<f64>>) {
    let n = x.len();
    let dims = x[0].len();
    let config = FuzzyConfig {
        clusters,
        seed,
        ..Default::default()
    };
    let init = random_memberships(n, clusters, seed);
    let rows = DMatrix::from_fn(n, dims, |r, c| x[r][c]);
    let ours = fuzzy_cmeans_from(&rows, &config, init.clone()).unwrap();
    let init_rows: Vec<Vec<f64>> = (0..n).map(|r| init.row(r).iter().copied().collect()).collect();
    let reference = reference_fcm(x, init_rows, 2.0, config.max_iter, config.tolerance);
    for i in 0..n {
        for k in 0..clusters {
            assert!(
                (ours.memberships[(i, k)] - reference[i][k]).abs() < 1e-6,
                "seed {seed} ({i},{k}): {} vs {}",
                ours.memberships[(i, k)],
                reference[i][k]
            );
        }
    }
    (ours.memberships, reference)
}

fn argmax(row: &[f64]) -> usize {
    (0..row.len()).fold(0, |best, k| if row[k] > row[best] { k } else { best })
}

#[test]
fn fuzzy_cmeans_two_separated_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x: Vec<Vec<f64>> = (0..10)
        .map(|i| {
            let center = if i < 5 { -5.0 } else { 5.0 };
            vec![center + rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)]
        })
        .collect();
    for seed in 0..10 {
        let (_, reference) = shared_init_run(&x, 2, seed);
        let left = argmax(&reference[0]);
        for (i, row) in reference.iter().enumerate() {
            let own = if i < 5 { left } else { 1 - left };
            assert!(row[own] > 0.9, "seed {seed}: point {i} {row:?}");
        }
    }
}

#[test]
fn fuzzy_cmeans_one_cluster_per_point() {
    let x: Vec<Vec<f64>> = (0..6).map(|i| vec![(i * i) as f64, (i % 2) as f64 * 3.0]).collect();
    for seed in 0..10 {
        let (_, reference) = shared_init_run(&x, 6, seed);
        let mut owners: Vec<usize> = reference.iter().map(|row| argmax(row)).collect();
        owners.sort_unstable();
        owners.dedup();
        assert_eq!(owners.len(), 6, "seed {seed}: {reference:?}");
    }
}
