//! Approximate randomization test for the accuracy difference of two
//! systems evaluated on the same documents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::text::Label;

/// Fraction of positions where `predictions` equals `labels`.
pub fn accuracy(predictions: &[Label], labels: &[Label]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::InvalidConfig("accuracy of an empty prediction set".into()));
    }
    let hits = predictions.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(hits as f64 / labels.len() as f64)
}

/// Two-sided p-value of `|acc_a - acc_b|` under random per-document swaps
/// of the two systems' predictions, smoothed as `(hits + 1) / (R + 1)`.
///
/// Each iteration draws from its own ChaCha stream of `seed`, so results do
/// not depend on how iterations are scheduled across threads.
pub fn approx_randomization_test(
    preds_a: &[Label],
    preds_b: &[Label],
    labels: &[Label],
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    if preds_a.len() != labels.len() || preds_b.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: preds_a.len().max(preds_b.len()),
            right: labels.len(),
        });
    }
    if iterations == 0 {
        return Err(Error::InvalidConfig(
            "randomization test needs at least one iteration".into(),
        ));
    }
    // Only documents where exactly one system is right move the statistic:
    // +1 where A alone is right, -1 where B alone is right.
    let deltas: Vec<i64> = preds_a
        .iter()
        .zip(preds_b)
        .zip(labels)
        .filter_map(|((a, b), l)| match (a == l, b == l) {
            (true, false) => Some(1),
            (false, true) => Some(-1),
            _ => None,
        })
        .collect();
    let observed: i64 = deltas.iter().sum::<i64>().abs();

    let hits: usize = (0..iterations)
        .into_par_iter()
        .filter(|&r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let pseudo: i64 = deltas.iter().map(|&d| if rng.random_bool(0.5) { -d } else { d }).sum();
            pseudo.abs() >= observed
        })
        .count();
    Ok((hits + 1) as f64 / (iterations + 1) as f64)
}
