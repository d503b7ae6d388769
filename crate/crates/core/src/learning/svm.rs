//! Soft-margin C-SVM on a precomputed kernel.
//!
//! The binary dual `min 1/2 a^T Q a - e^T a, 0 <= a <= C, y^T a = 0` with
//! `Q_ij = y_i y_j K_ij` is solved by SMO with maximal-violating-pair
//! selection. Several classes are handled one-vs-one with majority voting.

use super::eigen::{check_symmetric, sym_eigenvalues};
use super::{LearningError, SquareMatrix};

/// Curvature floor for non-positive pair curvature.
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SvmOptions {
    /// KKT violation tolerance at which the solver stops.
    pub eps: f64,
    pub max_iter: usize,
    /// Shift the Gram by `(|min eig| + 1e-10) I` when its smallest
    /// eigenvalue falls below `-psd_tol * max |eig|`.
    pub check_psd: bool,
    pub psd_tol: f64,
}

impl Default for SvmOptions {
    fn default() -> Self {
        Self { eps: 1e-3, max_iter: 100_000, check_psd: true, psd_tol: 1e-6 }
    }
}

/// One binary machine. `positive` is predicted when the decision value is > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySvm {
    pub positive: i64,
    pub negative: i64,
    /// Training indices with nonzero dual coefficient.
    pub support_indices: Vec<usize>,
    /// `alpha_i * y_i` for each support index.
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
}

impl BinarySvm {
    /// `sum alpha_i y_i K(x_i, x) + bias`; `k_row[i]` is the kernel value
    /// between the query and training item `i`.
    pub fn decision(&self, k_row: &[f64]) -> f64 {
        let s: f64 = self.support_indices.iter().zip(&self.dual_coefficients).map(|(&i, &a)| a * k_row[i]).sum();
        s + self.bias
    }

    pub fn predict(&self, k_row: &[f64]) -> i64 {
        if self.decision(k_row) > 0.0 {
            self.positive
        } else {
            self.negative
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    /// Ascending.
    pub classes: Vec<i64>,
    /// One machine per class pair `(classes[a], classes[b])`, `a < b`, in
    /// lexicographic order.
    pub machines: Vec<BinarySvm>,
    pub c: f64,
    pub n_train: usize,
    /// Set when the Gram had to be shifted to become positive semidefinite.
    pub warning: Option<String>,
}

impl SvmModel {
    /// Predicted label for a query given its kernel values against all
    /// training items. Votes are tied to the smallest label.
    pub fn predict(&self, k_row: &[f64]) -> i64 {
        assert_eq!(k_row.len(), self.n_train, "kernel row length must equal the training size");
        if self.machines.len() == 1 {
            return self.machines[0].predict(k_row);
        }
        let mut votes = vec![0usize; self.classes.len()];
        for m in &self.machines {
            let winner = m.predict(k_row);
            let idx = self.classes.binary_search(&winner).expect("machine labels are model classes");
            votes[idx] += 1;
        }
        let best = votes.iter().enumerate().fold(0, |b, (i, &v)| if v > votes[b] { i } else { b });
        self.classes[best]
    }

    /// Predictions for the training items themselves.
    pub fn predict_training(&self, k: &SquareMatrix) -> Vec<i64> {
        (0..k.n()).map(|i| self.predict(k.row(i))).collect()
    }

    /// Number of distinct training items that are support vectors of some machine.
    pub fn n_support(&self) -> usize {
        let mut all: Vec<usize> = self.machines.iter().flat_map(|m| m.support_indices.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }
}

pub fn svm_train(k: &SquareMatrix, labels: &[i64], c: f64) -> Result<SvmModel, LearningError> {
    svm_train_with(k, labels, c, &SvmOptions::default())
}

pub fn svm_train_with(k: &SquareMatrix, labels: &[i64], c: f64, opts: &SvmOptions) -> Result<SvmModel, LearningError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(LearningError::InvalidParameter(format!("C must be positive and finite, got {c}")));
    }
    if labels.len() != k.n() {
        return Err(LearningError::BadMatrix(format!("{} labels for a {}x{} Gram", labels.len(), k.n(), k.n())));
    }
    if k.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(LearningError::BadMatrix("Gram contains non-finite entries".into()));
    }
    check_symmetric(k)?;
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(LearningError::SingleClass);
    }

    let mut warning = None;
    let shifted;
    let k = if opts.check_psd {
        let eig = sym_eigenvalues(k)?;
        let scale = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let min = eig.first().copied().unwrap_or(0.0);
        if min < -opts.psd_tol * scale {
            let shift = min.abs() + 1e-10;
            warning =
                Some(format!("Gram not positive semidefinite (min eigenvalue {min:e}); diagonal shifted by {shift:e}"));
            shifted = SquareMatrix::from_fn(k.n(), |i, j| if i == j { k[(i, j)] + shift } else { k[(i, j)] });
            &shifted
        } else {
            k
        }
    } else {
        k
    };

    let mut machines = Vec::new();
    for a in 0..classes.len() {
        for b in (a + 1)..classes.len() {
            let (pos, neg) = (classes[a], classes[b]);
            let idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == pos || labels[i] == neg).collect();
            let y: Vec<f64> = idx.iter().map(|&i| if labels[i] == pos { 1.0 } else { -1.0 }).collect();
            let sub = k.select(&idx);
            let sol = solve_binary(&sub, &y, c, opts)?;
            let (support_indices, dual_coefficients) = idx
                .iter()
                .zip(sol.alpha.iter().zip(&y))
                .filter(|(_, (&a, _))| a > 0.0)
                .map(|(&i, (&a, &yi))| (i, a * yi))
                .unzip();
            machines.push(BinarySvm {
                positive: pos,
                negative: neg,
                support_indices,
                dual_coefficients,
                bias: -sol.rho,
                iterations: sol.iterations,
            });
        }
    }
    Ok(SvmModel { classes, machines, c, n_train: labels.len(), warning })
}

struct Solution {
    alpha: Vec<f64>,
    rho: f64,
    iterations: usize,
}

fn solve_binary(k: &SquareMatrix, y: &[f64], c: f64, opts: &SvmOptions) -> Result<Solution, LearningError> {
    let n = y.len();
    let q = |i: usize, j: usize| y[i] * y[j] * k[(i, j)];
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let up = |a: f64, yi: f64| if yi > 0.0 { a < c } else { a > 0.0 };
    let low = |a: f64, yi: f64| if yi > 0.0 { a > 0.0 } else { a < c };

    let mut iterations = 0;
    loop {
        let mut i = None;
        let mut gmax = f64::NEG_INFINITY;
        let mut j = None;
        let mut gmin = f64::INFINITY;
        for t in 0..n {
            let v = -y[t] * grad[t];
            if up(alpha[t], y[t]) && v > gmax {
                gmax = v;
                i = Some(t);
            }
            if low(alpha[t], y[t]) && v < gmin {
                gmin = v;
                j = Some(t);
            }
        }
        let (Some(i), Some(j)) = (i, j) else { break };
        if gmax - gmin < opts.eps {
            break;
        }
        if iterations >= opts.max_iter {
            return Err(LearningError::SolverNoConvergence(opts.max_iter));
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let (mut ai, mut aj) = (old_i, old_j);
        if y[i] != y[j] {
            let mut quad = k[(i, i)] + k[(j, j)] + 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let mut quad = k[(i, i)] + k[(j, j)] - 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha[i] = ai;
        alpha[j] = aj;
        let (di, dj) = (ai - old_i, aj - old_j);
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(t, i) * di + q(t, j) * dj;
        }
    }

    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut n_free = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            free_sum += yg;
        }
    }
    let rho = if n_free > 0 { free_sum / n_free as f64 } else { 0.5 * (ub + lb) };
    Ok(Solution { alpha, rho, iterations })
}
