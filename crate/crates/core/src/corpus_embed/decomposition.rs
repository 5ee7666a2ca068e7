use nalgebra::{DMatrix, DVector, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Leading singular triplets of a matrix: `M ~= U diag(s) Vt`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult {
    /// `rows x k`, orthonormal columns.
    pub u: DMatrix<f64>,
    /// `k` values, non-increasing.
    pub singular_values: DVector<f64>,
    /// `k x cols`.
    pub v_t: DMatrix<f64>,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.u * DMatrix::from_diagonal(&self.singular_values) * &self.v_t
    }
}

/// Matrices whose smaller side exceeds this use a randomized range finder
/// instead of a full decomposition.
pub const EXACT_SVD_LIMIT: usize = 1500;

const OVERSAMPLE: usize = 20;
const POWER_ITERATIONS: usize = 4;
const SKETCH_SEED: u64 = 0x5eed;

/// Truncated SVD keeping the `k` largest singular values; `k` is clamped to
/// `min(rows, cols)`.
///
/// Each left singular vector is sign-normalized so that its largest-magnitude
/// component is positive (the matching row of `Vt` flips with it).
///
/// Large matrices with `k` well below `min(rows, cols)` are handled by a
/// seeded randomized subspace iteration, so the result is deterministic.
pub fn truncated_svd(m: &DMatrix<f64>, k: usize) -> Result<SvdResult> {
    if k == 0 {
        return Err(Error::InvalidConfig("number of singular values must be > 0".into()));
    }
    if m.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    check_finite(m)?;
    let small = m.nrows().min(m.ncols());
    if small > EXACT_SVD_LIMIT && k + OVERSAMPLE < small / 2 {
        randomized_svd(m, k)
    } else {
        exact_svd(m, k)
    }
}

/// Full SVD followed by truncation.
pub fn exact_svd(m: &DMatrix<f64>, k: usize) -> Result<SvdResult> {
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Decomposition("SVD did not converge".into()))?;
    Ok(select(
        &svd.u.expect("u requested"),
        &svd.singular_values,
        &svd.v_t.expect("v_t requested"),
        k,
    ))
}

/// Randomized SVD: uniform random sketch, subspace iteration with QR
/// re-orthonormalization, then an exact SVD of the projected matrix.
pub fn randomized_svd(m: &DMatrix<f64>, k: usize) -> Result<SvdResult> {
    let small = m.nrows().min(m.ncols());
    let width = (k + OVERSAMPLE).min(small);
    let mut rng = ChaCha8Rng::seed_from_u64(SKETCH_SEED);
    let sketch = DMatrix::from_fn(m.ncols(), width, |_, _| rng.random_range(-1.0..1.0));
    let mut q = (m * sketch).qr().q();
    for _ in 0..POWER_ITERATIONS {
        let z = (m.transpose() * &q).qr().q();
        q = (m * z).qr().q();
    }
    let projected = q.transpose() * m;
    let svd = SVD::try_new(projected, true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Decomposition("SVD did not converge".into()))?;
    let u = q * svd.u.expect("u requested");
    Ok(select(&u, &svd.singular_values, &svd.v_t.expect("v_t requested"), k))
}

fn select(u_full: &DMatrix<f64>, values: &DVector<f64>, vt_full: &DMatrix<f64>, k: usize) -> SvdResult {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let k = k.min(values.len());
    order.truncate(k);

    let mut u = DMatrix::zeros(u_full.nrows(), k);
    let mut v_t = DMatrix::zeros(k, vt_full.ncols());
    let mut s = DVector::zeros(k);
    for (dst, &src) in order.iter().enumerate() {
        let col = u_full.column(src);
        let pivot = col
            .iter()
            .copied()
            .reduce(|best, x| if x.abs() > best.abs() { x } else { best })
            .unwrap_or(0.0);
        let flip = if pivot < 0.0 { -1.0 } else { 1.0 };
        u.set_column(dst, &(col * flip));
        v_t.set_row(dst, &(vt_full.row(src) * flip));
        s[dst] = values[src].max(0.0);
    }
    SvdResult {
        u,
        singular_values: s,
        v_t,
    }
}

/// Principal components of the rows of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PcaResult {
    /// Projected rows, `rows x k`.
    pub scores: DMatrix<f64>,
    /// Principal directions as rows, `k x cols`.
    pub components: DMatrix<f64>,
    /// Column means removed before projection.
    pub means: DVector<f64>,
    /// Per-component sample variance (divisor `rows - 1`).
    pub explained_variance: DVector<f64>,
}

/// PCA by SVD of the column-centered matrix, keeping `k` components
/// (clamped to `min(rows, cols)`).
pub fn pca(m: &DMatrix<f64>, k: usize) -> Result<PcaResult> {
    if k == 0 {
        return Err(Error::InvalidConfig("number of components must be > 0".into()));
    }
    if m.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let means = m.row_mean().transpose();
    let mut centered = m.clone();
    for (mut col, mean) in centered.column_iter_mut().zip(means.iter()) {
        col.add_scalar_mut(-mean);
    }
    let svd = truncated_svd(&centered, k)?;
    let scores = &svd.u * DMatrix::from_diagonal(&svd.singular_values);
    let denom = (m.nrows().max(2) - 1) as f64;
    let explained_variance = svd.singular_values.map(|s| s * s / denom);
    Ok(PcaResult {
        scores,
        components: svd.v_t,
        means,
        explained_variance,
    })
}

/// Rows projected onto the top `k` principal directions.
pub fn pca_reduce(m: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>> {
    Ok(pca(m, k)?.scores)
}

pub(crate) fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if !m[(r, c)].is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    Ok(())
}
