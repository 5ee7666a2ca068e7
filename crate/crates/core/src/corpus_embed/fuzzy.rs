//! Fuzzy c-means clustering.
//!
//! Alternates between membership-weighted centroids
//! `c_j = sum_i u_ij^m x_i / sum_i u_ij^m` and memberships
//! `u_ij = 1 / sum_k (d_ij / d_ik)^(2 / (m - 1))`. A point at distance zero
//! from one or more centroids splits its membership evenly among them.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::decomposition::check_finite;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzyConfig {
    pub clusters: usize,
    pub fuzzifier: f64,
    pub max_iter: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        Self {
            clusters: 200,
            fuzzifier: 2.0,
            max_iter: 25,
            tolerance: 1e-4,
            seed: 0,
        }
    }
}

impl FuzzyConfig {
    fn validate(&self) -> Result<()> {
        if self.clusters <= 1 {
            return Err(Error::InvalidConfig("fuzzy c-means needs more than one cluster".into()));
        }
        if self.fuzzifier.is_nan() || self.fuzzifier <= 1.0 || self.fuzzifier.is_infinite() {
            return Err(Error::InvalidConfig("fuzzifier must be a finite value > 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidConfig("tolerance must be >= 0".into()));
        }
        Ok(())
    }
}

/// Result of a fuzzy c-means run.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyMembership {
    /// `points x clusters`; every row sums to 1.
    pub memberships: DMatrix<f64>,
    /// `clusters x dims`.
    pub centroids: DMatrix<f64>,
    /// Objective `sum u^m d^2` after each membership update.
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Random row-stochastic `points x clusters` matrix from a seeded generator.
pub fn random_memberships(points: usize, clusters: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = DMatrix::zeros(points, clusters);
    for i in 0..points {
        let mut sum = 0.0;
        for j in 0..clusters {
            let v: f64 = rng.random_range(f64::EPSILON..1.0);
            u[(i, j)] = v;
            sum += v;
        }
        for j in 0..clusters {
            u[(i, j)] /= sum;
        }
    }
    u
}

/// Runs fuzzy c-means on the rows of `rows` from a seeded random
/// initialization. The cluster count is clamped to the number of rows.
pub fn fuzzy_cmeans(rows: &DMatrix<f64>, config: &FuzzyConfig) -> Result<FuzzyMembership> {
    config.validate()?;
    let clusters = config.clusters.min(rows.nrows());
    let init = random_memberships(rows.nrows(), clusters, config.seed);
    fuzzy_cmeans_from(rows, config, init)
}

/// Runs fuzzy c-means from an explicit initial membership matrix.
pub fn fuzzy_cmeans_from(rows: &DMatrix<f64>, config: &FuzzyConfig, init: DMatrix<f64>) -> Result<FuzzyMembership> {
    config.validate()?;
    if rows.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    check_finite(rows)?;
    if init.nrows() != rows.nrows() {
        return Err(Error::DimensionMismatch {
            expected: rows.nrows(),
            got: init.nrows(),
        });
    }
    let n = rows.nrows();
    let dims = rows.ncols();
    let c = init.ncols();
    let m = config.fuzzifier;

    // Row-major copies keep the inner distance loops contiguous.
    let points: Vec<f64> = rows.transpose().as_slice().to_vec();
    let mut u: Vec<f64> = init.transpose().as_slice().to_vec();
    let mut centroids = vec![0.0; c * dims];
    let mut d2 = vec![0.0; c];
    let mut next = vec![0.0; n * c];
    let mut objective = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        update_centroids(&points, &u, &mut centroids, n, c, dims, m);

        let mut j_value = 0.0;
        let mut max_change: f64 = 0.0;
        for i in 0..n {
            let x = &points[i * dims..(i + 1) * dims];
            for (k, d) in d2.iter_mut().enumerate() {
                *d = squared_distance(x, &centroids[k * dims..(k + 1) * dims]);
            }
            let row = &mut next[i * c..(i + 1) * c];
            membership_row(&d2, m, row);
            for k in 0..c {
                j_value += row[k].powf(m) * d2[k];
                max_change = max_change.max((row[k] - u[i * c + k]).abs());
            }
        }
        std::mem::swap(&mut u, &mut next);
        objective.push(j_value);
        iterations += 1;
        if max_change < config.tolerance {
            converged = true;
            break;
        }
    }

    Ok(FuzzyMembership {
        memberships: DMatrix::from_row_slice(n, c, &u),
        centroids: DMatrix::from_row_slice(c, dims, &centroids),
        objective,
        iterations,
        converged,
    })
}

fn update_centroids(points: &[f64], u: &[f64], centroids: &mut [f64], n: usize, c: usize, dims: usize, m: f64) {
    let mut weights = vec![0.0; c];
    centroids.iter_mut().for_each(|v| *v = 0.0);
    for i in 0..n {
        let x = &points[i * dims..(i + 1) * dims];
        for k in 0..c {
            let w = u[i * c + k].powf(m);
            if w == 0.0 {
                continue;
            }
            weights[k] += w;
            for (acc, xv) in centroids[k * dims..(k + 1) * dims].iter_mut().zip(x) {
                *acc += w * xv;
            }
        }
    }
    for k in 0..c {
        let centroid = &mut centroids[k * dims..(k + 1) * dims];
        if weights[k] > 0.0 {
            centroid.iter_mut().for_each(|v| *v /= weights[k]);
        } else {
            // Cluster with no mass: park it on the data mean.
            for (d, v) in centroid.iter_mut().enumerate() {
                *v = (0..n).map(|i| points[i * dims + d]).sum::<f64>() / n as f64;
            }
        }
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Memberships of one point given its squared distances to every centroid.
pub(crate) fn membership_row(d2: &[f64], m: f64, out: &mut [f64]) {
    let zeros = d2.iter().filter(|&&d| d == 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        for (o, &d) in out.iter_mut().zip(d2) {
            *o = if d == 0.0 { share } else { 0.0 };
        }
        return;
    }
    // (d_ij / d_ik)^(2/(m-1)) on squared distances is (d2_ij / d2_ik)^(1/(m-1)).
    // Scaling by the smallest distance keeps every term in (0, 1].
    let exponent = 1.0 / (m - 1.0);
    let min = d2.iter().copied().fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for (o, &d) in out.iter_mut().zip(d2) {
        *o = (min / d).powf(exponent);
        total += *o;
    }
    out.iter_mut().for_each(|o| *o /= total);
}
