use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::text::sliding_windows;

/// Symmetric window-count matrix over a vocabulary.
///
/// Off-diagonal `(i, j)` is the number of windows containing both words;
/// diagonal `(i, i)` is the number of windows containing word `i`. A word
/// repeated inside one window still counts once for that window.
#[derive(Clone, Debug, PartialEq)]
pub struct CooccurrenceMatrix {
    counts: DMatrix<f64>,
}

impl CooccurrenceMatrix {
    /// Accumulates counts over windows given as token-index slices.
    /// Out-of-vocabulary positions (`None`) are ignored.
    pub fn from_windows<'a, I>(windows: I, vocab_len: usize) -> Self
    where
        I: IntoIterator<Item = &'a [Option<usize>]>,
    {
        let mut counts = DMatrix::zeros(vocab_len, vocab_len);
        let mut present: Vec<usize> = Vec::new();
        for window in windows {
            present.clear();
            present.extend(window.iter().flatten().copied());
            present.sort_unstable();
            present.dedup();
            for (a, &i) in present.iter().enumerate() {
                counts[(i, i)] += 1.0;
                for &j in &present[a + 1..] {
                    counts[(i, j)] += 1.0;
                    counts[(j, i)] += 1.0;
                }
            }
        }
        Self { counts }
    }

    /// Builds the matrix from encoded documents using `window_size` tokens per side.
    pub fn from_documents(documents: &[Vec<Option<usize>>], vocab_len: usize, window_size: usize) -> Self {
        let windows = documents
            .iter()
            .flat_map(|doc| sliding_windows(doc, window_size).into_iter().map(move |w| w.slice(doc)));
        Self::from_windows(windows, vocab_len)
    }

    pub fn counts(&self) -> &DMatrix<f64> {
        &self.counts
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.counts[(i, j)]
    }
}

/// Divides every row by its maximum entry.
pub fn row_max_normalize(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut out = m.clone();
    for (r, mut row) in out.row_iter_mut().enumerate() {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max.is_nan() || max <= 0.0 {
            return Err(Error::ZeroRow { row: r });
        }
        row /= max;
    }
    Ok(out)
}

/// Positive pointwise mutual information over the full count table
/// (diagonal included), natural log. Zero counts map to 0.
pub fn ppmi(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let total: f64 = m.iter().sum();
    if m.is_empty() || total.is_nan() || total <= 0.0 {
        return Err(Error::EmptyMatrix);
    }
    let row_sums: Vec<f64> = m.row_iter().map(|r| r.sum()).collect();
    let col_sums: Vec<f64> = m.column_iter().map(|c| c.sum()).collect();
    Ok(DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let joint = m[(i, j)];
        if joint <= 0.0 {
            return 0.0;
        }
        // p(i,j) / (p(i) p(j)) = joint * total / (row_i * col_j)
        let pmi = (joint * total / (row_sums[i] * col_sums[j])).ln();
        pmi.max(0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_word_corpus() {
        // "a b" with window 1: both windows are [a, b].
        let m = CooccurrenceMatrix::from_documents(&[vec![Some(0), Some(1)]], 2, 1);
        assert_eq!(m.counts(), &DMatrix::from_row_slice(2, 2, &[2.0, 2.0, 2.0, 2.0]));
    }

    #[test]
    fn single_word_and_separated_words() {
        let m = CooccurrenceMatrix::from_documents(&[vec![Some(0), Some(0), Some(0)]], 1, 1);
        assert_eq!(m.get(0, 0), 3.0);
        let m = CooccurrenceMatrix::from_documents(&[vec![Some(0)], vec![Some(1)]], 2, 3);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn repeated_word_counts_once_per_window() {
        let m = CooccurrenceMatrix::from_windows([&[Some(0), Some(0), Some(1)][..]], 2);
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn row_max_examples() {
        let m = DMatrix::from_row_slice(2, 3, &[0.0, 5.0, 10.0, 2.0, 4.0, 0.0]);
        let n = row_max_normalize(&m).unwrap();
        assert_eq!(n.row(0).iter().copied().collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
        assert_eq!(n.row(1).iter().copied().collect::<Vec<_>>(), vec![0.5, 1.0, 0.0]);
        assert_eq!(
            row_max_normalize(&DMatrix::from_element(1, 1, 3.0)).unwrap()[(0, 0)],
            1.0
        );
        assert!(matches!(
            row_max_normalize(&DMatrix::zeros(2, 2)),
            Err(Error::ZeroRow { row: 0 })
        ));
    }

    #[test]
    fn ppmi_two_word_table() {
        // Every cell is 2/8; marginals 1/2 each, so PMI = ln(1) = 0.
        let m = DMatrix::from_element(2, 2, 2.0);
        assert_eq!(ppmi(&m).unwrap(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn ppmi_hand_table() {
        // counts [[3,1],[1,1]], total 6, row sums 4 and 2.
        // (0,0): 3*6/16 -> ln(1.125); (0,1): 6/8 -> negative, clipped;
        // (1,1): 6/4 -> ln(1.5).
        let m = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 1.0]);
        let p = ppmi(&m).unwrap();
        assert!((p[(0, 0)] - 1.125f64.ln()).abs() < 1e-15);
        assert_eq!(p[(0, 1)], 0.0);
        assert_eq!(p[(1, 0)], 0.0);
        assert!((p[(1, 1)] - 1.5f64.ln()).abs() < 1e-15);
        assert!(ppmi(&DMatrix::zeros(2, 2)).is_err());
        assert!(ppmi(&DMatrix::zeros(0, 0)).is_err());
    }
}
