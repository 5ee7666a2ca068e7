//! Cosine nearest-neighbor queries over a word matrix.

use nalgebra::DMatrix;

use crate::corpus_embed::cosine;
use crate::error::{Error, Result};

/// Up to `top` words most similar to `query`, most similar first, ties
/// broken lexicographically. The query itself is never returned.
pub fn nearest_neighbors(
    words: &[String],
    matrix: &DMatrix<f64>,
    query: &str,
    top: usize,
) -> Result<Vec<(String, f64)>> {
    if words.len() != matrix.nrows() {
        return Err(Error::LengthMismatch {
            left: words.len(),
            right: matrix.nrows(),
        });
    }
    let Some(q) = words.iter().position(|w| w == query) else {
        return Err(Error::UnknownWord {
            word: query.to_owned(),
            suggestions: suggest(words, query, 5),
        });
    };
    let target: Vec<f64> = matrix.row(q).iter().copied().collect();
    let mut scored: Vec<(String, f64)> = words
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != q)
        .map(|(i, w)| {
            let row: Vec<f64> = matrix.row(i).iter().copied().collect();
            (w.clone(), cosine(&target, &row))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(top);
    Ok(scored)
}

/// Closest vocabulary strings by edit distance.
pub fn suggest(words: &[String], query: &str, limit: usize) -> Vec<String> {
    let mut ranked: Vec<(usize, &String)> = words.iter().map(|w| (strsim::levenshtein(w, query), w)).collect();
    ranked.sort();
    ranked.into_iter().take(limit).map(|(_, w)| w.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(w: &[&str]) -> Vec<String> {
        w.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ranking_and_ties() {
        let w = words(&["good", "great", "fine", "bad", "nice"]);
        let m = DMatrix::from_row_slice(5, 2, &[1.0, 0.1, 2.0, 0.2, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
        let n = nearest_neighbors(&w, &m, "good", 10).unwrap();
        assert_eq!(n.len(), 4);
        assert_eq!(n[0].0, "great");
        assert!((n[0].1 - 1.0).abs() < 1e-12);
        // fine and nice share a vector: lexicographic order.
        assert_eq!((n[1].0.as_str(), n[2].0.as_str()), ("fine", "nice"));
        assert_eq!(n[3].0, "bad");
        assert_eq!(nearest_neighbors(&w, &m, "good", 2).unwrap().len(), 2);
    }

    #[test]
    fn unknown_word_suggests() {
        let w = words(&["good", "great", "bad"]);
        let m = DMatrix::identity(3, 3);
        match nearest_neighbors(&w, &m, "goood", 3) {
            Err(Error::UnknownWord { suggestions, .. }) => assert_eq!(suggestions[0], "good"),
            other => panic!("{other:?}"),
        }
    }
}
