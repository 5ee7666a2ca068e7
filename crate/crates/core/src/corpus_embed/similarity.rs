use nalgebra::DMatrix;

/// Pairwise cosine similarity between rows.
///
/// A zero-norm row has similarity 0 with every other row; the diagonal is
/// always exactly 1. Entries are clamped to `[-1, 1]`.
pub fn cosine_similarity_matrix(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norms: Vec<f64> = m.row_iter().map(|r| r.norm()).collect();
    let mut s = DMatrix::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let value = if norms[i] == 0.0 || norms[j] == 0.0 {
                0.0
            } else {
                (m.row(i).dot(&m.row(j)) / (norms[i] * norms[j])).clamp(-1.0, 1.0)
            };
            s[(i, j)] = value;
            s[(j, i)] = value;
        }
    }
    s
}

/// Cosine similarity of two vectors; 0 if either has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(-1.0, 1.0)
    }
}

/// `1 - S` elementwise.
pub fn dissimilarity(similarity: &DMatrix<f64>) -> DMatrix<f64> {
    similarity.map(|s| 1.0 - s)
}
