//! Linear C-SVM trained in the dual with sequential minimal optimization.
//!
//! Solves
//!
//! ```text
//! min_w,b  1/2 |w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b))
//! ```
//!
//! through its dual `min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0` with
//! second-order working-set selection. The bias is not regularized.
//! Deterministic: no randomness is involved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Label;

const TAU: f64 = 1e-12;
/// Above this many examples kernel rows are computed on demand instead of
/// caching the full Gram matrix.
const GRAM_CACHE_LIMIT: usize = 3000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    /// Penalty on hinge loss.
    pub c: f64,
    /// Stopping tolerance on the maximal KKT violation.
    pub tolerance: f64,
    pub max_iter: Option<usize>,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            tolerance: 1e-3,
            max_iter: None,
        }
    }
}

/// `sign(w.x + b)`, with ties going to the positive class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub iterations: usize,
}

impl LinearModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        if self.decision(x) >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn predict_all<R: AsRef<[f64]>>(&self, rows: &[R]) -> Vec<Label> {
        rows.iter().map(|r| self.predict(r.as_ref())).collect()
    }

    /// Primal objective on a data set.
    pub fn objective<R: AsRef<[f64]>>(&self, x: &[R], y: &[Label]) -> f64 {
        let hinge: f64 = x
            .iter()
            .zip(y)
            .map(|(row, label)| (1.0 - label.sign() * self.decision(row.as_ref())).max(0.0))
            .sum();
        0.5 * dot(&self.weights, &self.weights) + self.c * hinge
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

enum Kernel<'a, R> {
    Cached { gram: Vec<f64>, n: usize },
    OnDemand { x: &'a [R] },
}

impl<R: AsRef<[f64]>> Kernel<'_, R> {
    fn new(x: &[R]) -> Kernel<'_, R> {
        let n = x.len();
        if n <= GRAM_CACHE_LIMIT {
            let mut gram = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let k = dot(x[i].as_ref(), x[j].as_ref());
                    gram[i * n + j] = k;
                    gram[j * n + i] = k;
                }
            }
            Kernel::Cached { gram, n }
        } else {
            Kernel::OnDemand { x }
        }
    }

    fn row(&self, i: usize, out: &mut [f64]) {
        match self {
            Kernel::Cached { gram, n } => out.copy_from_slice(&gram[i * n..(i + 1) * n]),
            Kernel::OnDemand { x } => {
                let xi = x[i].as_ref();
                for (o, xt) in out.iter_mut().zip(x.iter()) {
                    *o = dot(xi, xt.as_ref());
                }
            }
        }
    }
}

/// Trains a linear soft-margin SVM. Labels map to +1 (positive) and -1.
pub fn train_linear_svm<R: AsRef<[f64]>>(x: &[R], y: &[Label], config: &SvmConfig) -> Result<LinearModel> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if config.c.is_nan() || config.c <= 0.0 || config.c.is_infinite() {
        return Err(Error::InvalidConfig("C must be a positive finite value".into()));
    }
    let positive = y.iter().filter(|l| **l == Label::Positive).count();
    let negative = y.len() - positive;
    if positive == 0 || negative == 0 {
        return Err(Error::SingleClass { positive, negative });
    }
    let dims = x[0].as_ref().len();
    for (r, row) in x.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: row.len(),
            });
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: r, col: c });
        }
    }

    let n = x.len();
    let c = config.c;
    let ys: Vec<f64> = y.iter().map(|l| l.sign()).collect();
    let kernel = Kernel::new(x);
    let diag: Vec<f64> = (0..n).map(|i| dot(x[i].as_ref(), x[i].as_ref())).collect();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut k_i = vec![0.0; n];
    let mut k_j = vec![0.0; n];
    let max_iter = config.max_iter.unwrap_or_else(|| (100 * n).max(10_000_000));
    let is_upper = |a: f64| a >= c;
    let is_lower = |a: f64| a <= 0.0;

    let mut iterations = 0;
    while iterations < max_iter {
        // i: maximal violator among the indices that may move "up".
        let mut g_max = f64::NEG_INFINITY;
        let mut sel_i = None;
        for t in 0..n {
            let movable = if ys[t] > 0.0 {
                !is_upper(alpha[t])
            } else {
                !is_lower(alpha[t])
            };
            if movable {
                let v = -ys[t] * grad[t];
                if v >= g_max {
                    g_max = v;
                    sel_i = Some(t);
                }
            }
        }
        let Some(i) = sel_i else { break };
        kernel.row(i, &mut k_i);

        // j: second-order selection among the "down" set.
        let mut g_max2 = f64::NEG_INFINITY;
        let mut sel_j = None;
        let mut best = f64::INFINITY;
        for t in 0..n {
            let movable = if ys[t] > 0.0 {
                !is_lower(alpha[t])
            } else {
                !is_upper(alpha[t])
            };
            if !movable {
                continue;
            }
            let v = ys[t] * grad[t];
            g_max2 = g_max2.max(v);
            let grad_diff = g_max + v;
            if grad_diff > 0.0 {
                let quad = diag[i] + diag[t] - 2.0 * k_i[t];
                let quad = if quad > 0.0 { quad } else { TAU };
                let obj = -(grad_diff * grad_diff) / quad;
                if obj <= best {
                    best = obj;
                    sel_j = Some(t);
                }
            }
        }
        let Some(j) = sel_j else { break };
        if g_max + g_max2 < config.tolerance {
            break;
        }
        iterations += 1;
        kernel.row(j, &mut k_j);

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let q_ij = ys[i] * ys[j] * k_i[j];
        if ys[i] != ys[j] {
            let quad = diag[i] + diag[j] + 2.0 * q_ij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = diag[i] + diag[j] - 2.0 * q_ij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let d_i = alpha[i] - old_i;
        let d_j = alpha[j] - old_j;
        for t in 0..n {
            grad[t] += ys[t] * (ys[i] * k_i[t] * d_i + ys[j] * k_j[t] * d_j);
        }
    }

    // Offset from free support vectors, or the midpoint of the feasible
    // interval when every multiplier sits at a bound.
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free = 0usize;
    for t in 0..n {
        let yg = ys[t] * grad[t];
        if is_upper(alpha[t]) {
            if ys[t] < 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else if is_lower(alpha[t]) {
            if ys[t] > 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 {
        free_sum / free as f64
    } else {
        (upper + lower) / 2.0
    };

    let mut weights = vec![0.0; dims];
    for t in 0..n {
        if alpha[t] != 0.0 {
            let coef = alpha[t] * ys[t];
            for (w, v) in weights.iter_mut().zip(x[t].as_ref()) {
                *w += coef * v;
            }
        }
    }
    Ok(LinearModel {
        weights,
        bias: -rho,
        c,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let x = vec![vec![1.0, 1.0], vec![-1.0, -1.0]];
        let y = vec![Label::Positive, Label::Negative];
        let m = train_linear_svm(&x, &y, &SvmConfig::default()).unwrap();
        assert_eq!(m.predict_all(&x), y);
        for (row, label) in x.iter().zip(&y) {
            assert!(label.sign() * m.decision(row) > 0.0);
        }
        // Hard-margin solution: w = (0.5, 0.5), b = 0.
        assert!((m.weights[0] - 0.5).abs() < 1e-6);
        assert!(m.bias.abs() < 1e-6);
    }

    #[test]
    fn all_zero_features_predict_majority() {
        let x = vec![vec![0.0; 3]; 5];
        let y = vec![
            Label::Positive,
            Label::Positive,
            Label::Positive,
            Label::Negative,
            Label::Negative,
        ];
        let m = train_linear_svm(&x, &y, &SvmConfig::default()).unwrap();
        assert!(m.weights.iter().all(|w| *w == 0.0));
        assert_eq!(m.predict(&[0.0; 3]), Label::Positive);
        let flipped: Vec<Label> = y.iter().map(|l| l.flipped()).collect();
        let m = train_linear_svm(&x, &flipped, &SvmConfig::default()).unwrap();
        assert_eq!(m.predict(&[0.0; 3]), Label::Negative);
    }

    #[test]
    fn errors() {
        let x = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            train_linear_svm(&x, &[Label::Positive, Label::Positive], &SvmConfig::default()),
            Err(Error::SingleClass { .. })
        ));
        assert!(train_linear_svm(&x, &[Label::Positive], &SvmConfig::default()).is_err());
        let ragged = vec![vec![1.0], vec![2.0, 3.0]];
        assert!(train_linear_svm(&ragged, &[Label::Positive, Label::Negative], &SvmConfig::default()).is_err());
        let bad_c = SvmConfig {
            c: 0.0,
            ..Default::default()
        };
        assert!(train_linear_svm(&x, &[Label::Positive, Label::Negative], &bad_c).is_err());
    }

    #[test]
    fn on_demand_kernel_matches_cached() {
        let x: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.11).cos(), 1.0])
            .collect();
        let y: Vec<Label> = x
            .iter()
            .map(|r| {
                if r[0] + 0.3 * r[1] > 0.1 {
                    Label::Positive
                } else {
                    Label::Negative
                }
            })
            .collect();
        let cached = Kernel::new(&x);
        let direct = Kernel::OnDemand { x: &x[..] };
        let mut a = vec![0.0; 40];
        let mut b = vec![0.0; 40];
        for i in [0, 17, 39] {
            cached.row(i, &mut a);
            direct.row(i, &mut b);
            assert_eq!(a, b);
        }
        let m = train_linear_svm(
            &x,
            &y,
            &SvmConfig {
                c: 10.0,
                ..Default::default()
            },
        )
        .unwrap();
        let errors = m.predict_all(&x).iter().zip(&y).filter(|(p, l)| p != l).count();
        assert!(errors <= 2, "{errors} training errors");
    }
}
