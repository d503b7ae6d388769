//! Positive / conditionally negative definiteness of symmetric matrices, and
//! a randomized search for diagram collections whose Wasserstein distance
//! matrix is not conditionally negative definite.
//!
//! A nonnegative, nonzero c.n.d. matrix has exactly one positive eigenvalue,
//! so a distance matrix with two positive and two negative eigenvalues is
//! neither c.n.d. nor c.p.d. A symmetric `d` is c.n.d. iff `exp(-xi d)` is
//! positive definite for every `xi > 0`, so such a witness also guarantees
//! some `xi` for which `exp(-xi d)` is not positive definite. The search
//! looks for that `xi` explicitly.

use rand::Rng;

use crate::diagram::{DiagramPoint, PersistenceDiagram};
use crate::matching::Exponent;
use crate::seed::{trial_rng, STREAM_INDEFINITENESS};

use super::eigen::sym_eigenvalues;
use super::gram::{distance_matrix, DistanceChoice};
use super::{LearningError, SquareMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct DefinitenessReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub n_positive: usize,
    pub n_negative: usize,
    pub psd: bool,
    /// Eigenvalues of the matrix restricted to `{c : sum c_i = 0}`.
    pub subspace_eigenvalues: Vec<f64>,
    pub cnd: bool,
    pub cpd: bool,
}

impl DefinitenessReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Line-oriented text: `eigenvalue <i> <value>` lines, then counts and flags.
    pub fn to_text(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::new();
        for (i, &v) in self.eigenvalues.iter().enumerate() {
            out.push_str(&format!("eigenvalue {i} {}\n", fmt(v)));
        }
        out.push_str(&format!("positive {}\n", self.n_positive));
        out.push_str(&format!("negative {}\n", self.n_negative));
        out.push_str(&format!("psd {}\n", self.psd));
        out.push_str(&format!("cnd {}\n", self.cnd));
        out.push_str(&format!("cpd {}\n", self.cpd));
        out
    }
}

/// Orthonormal basis of the sum-zero subspace: columns `1..n` of the
/// Householder reflection that maps `1/sqrt(n)` to `e_1`. Returns `Q^T M Q`.
fn sum_zero_projection(m: &SquareMatrix) -> SquareMatrix {
    let n = m.n();
    if n <= 1 {
        return SquareMatrix::zeros(0);
    }
    let u = 1.0 / (n as f64).sqrt();
    let mut v = vec![u; n];
    v[0] -= 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let h = SquareMatrix::from_fn(n, |i, j| f64::from(u8::from(i == j)) - 2.0 * v[i] * v[j] / vv);
    let mh = SquareMatrix::from_fn(n, |i, j| (0..n).map(|k| m[(i, k)] * h[(k, j)]).sum());
    let hmh = SquareMatrix::from_fn(n, |i, j| (0..n).map(|k| h[(k, i)] * mh[(k, j)]).sum());
    SquareMatrix::from_fn(n - 1, |i, j| hmh[(i + 1, j + 1)])
}

/// Eigen-analysis of `m` and of its restriction to the sum-zero subspace.
///
/// Eigenvalues count as positive or negative beyond `tol` times the largest
/// absolute eigenvalue. `psd` holds when the smallest eigenvalue is at least
/// `-tol * max(1, |largest|)`; `cnd`/`cpd` apply the same rule to the
/// restricted matrix.
pub fn definiteness_check(m: &SquareMatrix, tol: f64) -> Result<DefinitenessReport, LearningError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(LearningError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let eigenvalues = sym_eigenvalues(m)?;
    let scale = eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let n_positive = eigenvalues.iter().filter(|&&v| v > tol * scale).count();
    let n_negative = eigenvalues.iter().filter(|&&v| v < -tol * scale).count();
    let slack = |ev: &[f64]| tol * ev.last().map_or(0.0, |v| v.abs()).max(1.0);
    let psd = eigenvalues.first().is_none_or(|&min| min >= -slack(&eigenvalues));

    let sub = sum_zero_projection(m);
    let subspace_eigenvalues = sym_eigenvalues(&sub)?;
    let sub_slack = tol * subspace_eigenvalues.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let cnd = subspace_eigenvalues.last().is_none_or(|&max| max <= sub_slack);
    let cpd = subspace_eigenvalues.first().is_none_or(|&min| min >= -sub_slack);
    Ok(DefinitenessReport { eigenvalues, n_positive, n_negative, psd, subspace_eigenvalues, cnd, cpd })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub exponent: Exponent,
    /// Scale reported alongside the witness for `exp(-xi d)`.
    pub xi: f64,
    pub n_items: usize,
    pub seed: u64,
    pub max_trials: u32,
    /// Relative eigenvalue threshold for counting signs.
    pub tolerance: f64,
    /// Greedily drop items while the sign pattern survives.
    pub prune: bool,
}

impl SearchOptions {
    pub fn new(exponent: Exponent, seed: u64) -> Self {
        Self { exponent, xi: 1.0, n_items: 40, seed, max_trials: 1_000, tolerance: 1e-6, prune: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndefinitenessWitness {
    pub trial: u32,
    /// Positions of the kept diagrams within the trial's draw.
    pub kept: Vec<usize>,
    pub diagrams: Vec<PersistenceDiagram>,
    pub distances: SquareMatrix,
    /// Spectrum of `-d`.
    pub report_minus_d: DefinitenessReport,
    /// Spectrum of `exp(-xi d)` at the requested `xi`.
    pub report_exp: DefinitenessReport,
    /// A scale at which `exp(-xi d)` has a negative eigenvalue beyond tolerance.
    pub certifying_xi: f64,
    pub report_certifying: DefinitenessReport,
}

/// Diagram with 1 to 6 points, coordinates uniform in `[0, 1]^2` (each pair
/// sorted so that birth <= death).
pub fn random_diagram(rng: &mut impl Rng) -> PersistenceDiagram {
    let n = rng.gen_range(1..=6);
    let pts = (0..n)
        .map(|_| {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            DiagramPoint { birth: a.min(b), death: a.max(b) }
        })
        .collect();
    PersistenceDiagram::new(0, pts)
}

/// Scales tried when looking for a non-p.d. `exp(-xi d)`: `xi * 2^k`.
const XI_LADDER: std::ops::RangeInclusive<i32> = -24..=24;

/// Both `-d` and `d` have at least two eigenvalues beyond tolerance.
fn two_by_two(d: &SquareMatrix, tol: f64) -> Result<Option<DefinitenessReport>, LearningError> {
    let r = definiteness_check(&d.map(|v| -v), tol)?;
    Ok((r.n_positive >= 2 && r.n_negative >= 2).then_some(r))
}

/// `exp(-xi d)` has a negative eigenvalue beyond tolerance.
fn exp_indefinite(d: &SquareMatrix, xi: f64, tol: f64) -> Result<bool, LearningError> {
    Ok(definiteness_check(&d.map(|v| (-xi * v).exp()), tol)?.n_negative > 0)
}

/// Removes items, last first, as long as the sign pattern and the negative
/// eigenvalue of `exp(-xi d)` survive; repeats until no removal keeps both.
fn prune(d: &SquareMatrix, xi: f64, tol: f64) -> Result<Vec<usize>, LearningError> {
    let mut keep: Vec<usize> = (0..d.n()).collect();
    loop {
        let mut removed = false;
        for pos in (0..keep.len()).rev() {
            if keep.len() <= 4 {
                break;
            }
            let mut candidate = keep.clone();
            candidate.remove(pos);
            let sub = d.select(&candidate);
            if two_by_two(&sub, tol)?.is_some() && exp_indefinite(&sub, xi, tol)? {
                keep = candidate;
                removed = true;
            }
        }
        if !removed {
            return Ok(keep);
        }
    }
}

/// The `xi = base * 2^k` whose `exp(-xi d)` has the most negative relative
/// smallest eigenvalue, if any is negative beyond tolerance.
fn certify(d: &SquareMatrix, base: f64, tol: f64) -> Result<Option<(f64, DefinitenessReport)>, LearningError> {
    let mut best: Option<(f64, f64, DefinitenessReport)> = None;
    for k in XI_LADDER {
        let xi = base * 2f64.powi(k);
        let report = definiteness_check(&d.map(|v| (-xi * v).exp()), tol)?;
        let rel = report.min_eigenvalue() / report.max_abs_eigenvalue();
        if report.n_negative > 0 && best.as_ref().is_none_or(|(r, _, _)| rel < *r) {
            best = Some((rel, xi, report));
        }
    }
    Ok(best.map(|(_, xi, r)| (xi, r)))
}

/// Draws `n_items` random diagrams per trial until the distance matrix has
/// two positive and two negative eigenvalues and some `exp(-xi d)` has a
/// negative one. With `prune`, the witness is reduced to a subset that keeps
/// both properties.
pub fn indefiniteness_search(opts: &SearchOptions) -> Result<IndefinitenessWitness, LearningError> {
    if opts.n_items < 4 {
        return Err(LearningError::InvalidParameter("need at least 4 items".into()));
    }
    if opts.xi.is_nan() || opts.xi <= 0.0 {
        return Err(LearningError::InvalidParameter(format!("xi must be positive, got {}", opts.xi)));
    }
    let tol = opts.tolerance;
    for trial in 0..opts.max_trials {
        let mut rng = trial_rng(opts.seed, STREAM_INDEFINITENESS, trial);
        let drawn: Vec<PersistenceDiagram> = (0..opts.n_items).map(|_| random_diagram(&mut rng)).collect();
        let full = distance_matrix(&drawn, DistanceChoice::Wasserstein(opts.exponent), 1).matrix;
        if two_by_two(&full, tol)?.is_none() {
            continue;
        }
        let Some((full_xi, _)) = certify(&full, opts.xi, tol)? else { continue };
        let kept: Vec<usize> = if opts.prune { prune(&full, full_xi, tol)? } else { (0..drawn.len()).collect() };
        let d = full.select(&kept);
        let report_minus_d = two_by_two(&d, tol)?.expect("pruning keeps the sign pattern");
        let (certifying_xi, report_certifying) =
            certify(&d, opts.xi, tol)?.expect("pruning keeps a negative eigenvalue");
        let report_exp = definiteness_check(&d.map(|v| (-opts.xi * v).exp()), tol)?;
        return Ok(IndefinitenessWitness {
            trial,
            diagrams: kept.iter().map(|&i| drawn[i].clone()).collect(),
            kept,
            distances: d,
            report_minus_d,
            report_exp,
            certifying_xi,
            report_certifying,
        });
    }
    Err(LearningError::SearchExhausted(opts.max_trials as usize))
}
