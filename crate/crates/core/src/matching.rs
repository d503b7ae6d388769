//! Bottleneck and p-Wasserstein distances between persistence diagrams.
//!
//! Both diagrams are augmented with diagonal slots so a bijection always
//! exists: each point of `F` may go to the diagonal and each point of `G` may
//! come from it. Ground distances are sup-norm; a point's distance to the
//! diagonal is `(death - birth) / 2`. Points already on the diagonal are
//! dropped before matching, which leaves every distance unchanged.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{canonical_order, DiagramPoint, PersistenceDiagram};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error("Wasserstein exponent must be >= 1 or `inf`, got {0}")]
    BadExponent(String),
    #[error("brute-force matching is limited to augmented size {limit}, got {found}")]
    TooLarge { limit: usize, found: usize },
}

/// Wasserstein order: finite `p >= 1` or infinity (bottleneck).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self, MatchingError> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinity)
        } else if p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(MatchingError::BadExponent(p.to_string()))
        }
    }
}

impl FromStr for Exponent {
    type Err = MatchingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = t.parse().map_err(|_| MatchingError::BadExponent(s.to_string()))?;
        Exponent::finite(p)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Augmented cost matrix of size `(n + m) x (n + m)`. Rows are the points of
/// `F` followed by `m` diagonal slots; columns are the points of `G` followed
/// by `n` diagonal slots.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingProblem {
    size: usize,
    costs: Vec<f64>,
}

impl MatchingProblem {
    /// Ground costs are `dist^p`, or plain sup-norm distances when `power` is
    /// `None`.
    pub fn new(f: &PersistenceDiagram, g: &PersistenceDiagram, power: Option<f64>) -> Self {
        let fp: Vec<DiagramPoint> = f.off_diagonal().collect();
        let gp: Vec<DiagramPoint> = g.off_diagonal().collect();
        let (n, m) = (fp.len(), gp.len());
        let size = n + m;
        let lift = |d: f64| match power {
            Some(p) => d.powf(p),
            None => d,
        };
        let mut costs = vec![0.0; size * size];
        for i in 0..size {
            for j in 0..size {
                costs[i * size + j] = match (i < n, j < m) {
                    (true, true) => lift(fp[i].linf(gp[j])),
                    (true, false) => lift(fp[i].diagonal_distance()),
                    (false, true) => lift(gp[j].diagonal_distance()),
                    (false, false) => 0.0,
                };
            }
        }
        Self { size, costs }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cost(&self, row: usize, col: usize) -> f64 {
        self.costs[row * self.size + col]
    }
}

/// Minimum-cost perfect assignment (Hungarian method with potentials,
/// `O(n^3)`). Returns the column assigned to each row.
pub fn hungarian(problem: &MatchingProblem) -> Vec<usize> {
    let n = problem.size();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; index 0 is a virtual column
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = problem.cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    assignment
}

/// `d_{W,p}(F, G)`; `Exponent::Infinity` delegates to [`bottleneck_distance`].
pub fn wasserstein_distance(f: &PersistenceDiagram, g: &PersistenceDiagram, p: Exponent) -> f64 {
    let p = match p {
        Exponent::Infinity => return bottleneck_distance(f, g),
        Exponent::Finite(p) => p,
    };
    // a fixed argument order makes the value exactly symmetric
    let (f, g) = if canonical_order(f, g).is_gt() { (g, f) } else { (f, g) };
    let problem = MatchingProblem::new(f, g, Some(p));
    let assignment = hungarian(&problem);
    let total: f64 = assignment.iter().enumerate().map(|(i, &j)| problem.cost(i, j)).sum();
    total.powf(1.0 / p)
}

/// Exact bottleneck distance: binary search over the finite set of candidate
/// values, testing each threshold with a maximum bipartite matching.
pub fn bottleneck_distance(f: &PersistenceDiagram, g: &PersistenceDiagram) -> f64 {
    let problem = MatchingProblem::new(f, g, None);
    let n = problem.size();
    if n == 0 {
        return 0.0;
    }
    let mut candidates: Vec<f64> = problem.costs.clone();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(&problem, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Hopcroft-Karp on the graph of augmented pairs with cost `<= threshold`.
fn has_perfect_matching(problem: &MatchingProblem, threshold: f64) -> bool {
    let n = problem.size();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| problem.cost(i, j) <= threshold).collect()).collect();
    hopcroft_karp(&adj, n) == n
}

fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> usize {
    const FREE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_l = vec![FREE; n_left];
    let mut match_r = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut matched = 0;

    loop {
        // BFS layering from free left vertices
        let mut queue = std::collections::VecDeque::new();
        for l in 0..n_left {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_r[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            return matched;
        }
        for l in 0..n_left {
            if match_l[l] == FREE && augment(l, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
}

fn augment(l: usize, adj: &[Vec<usize>], match_l: &mut [usize], match_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &r in &adj[l] {
        let next = match_r[r];
        let ok = next == usize::MAX || (dist[next] == dist[l] + 1 && augment(next, adj, match_l, match_r, dist));
        if ok {
            match_l[l] = r;
            match_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

/// Largest augmented size accepted by [`wasserstein_bruteforce`].
pub const MAX_BRUTEFORCE_SIZE: usize = 8;

/// Reference implementation: minimum over every permutation of the augmented
/// problem. Meant for checking the fast solvers on small inputs.
pub fn wasserstein_bruteforce(
    f: &PersistenceDiagram,
    g: &PersistenceDiagram,
    p: Exponent,
) -> Result<f64, MatchingError> {
    let problem = MatchingProblem::new(f, g, None);
    let n = problem.size();
    if n > MAX_BRUTEFORCE_SIZE {
        return Err(MatchingError::TooLarge { limit: MAX_BRUTEFORCE_SIZE, found: n });
    }
    let score = |perm: &[usize]| -> f64 {
        let costs = perm.iter().enumerate().map(|(i, &j)| problem.cost(i, j));
        match p {
            Exponent::Infinity => costs.fold(0.0, f64::max),
            Exponent::Finite(p) => costs.map(|c| c.powf(p)).sum(),
        }
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = score(&perm);
    // Heap's algorithm, iterative form
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(score(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(match p {
        Exponent::Infinity => best,
        Exponent::Finite(p) => best.powf(1.0 / p),
    })
}
