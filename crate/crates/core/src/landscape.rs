//! Persistence landscapes and the landscape kernel.
//!
//! Each point `(b, d)` contributes the tent `t -> max(0, min(t - b, d - t))`
//! and layer `k` of the landscape is the pointwise `k`-th largest tent. The
//! landscape kernel is `sum_k integral(lambda_k^F * lambda_k^G)`, evaluated
//! exactly: on every interval between merged breakpoints both factors are
//! linear, so the integrand is a quadratic and Simpson's rule is exact.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::{DiagramPoint, PersistenceDiagram};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LandscapeError {
    #[error("exhaustive bijection search is limited to {limit} points per diagram, got {found}")]
    TooLarge { limit: usize, found: usize },
}

/// Largest diagram accepted by [`landscape_stability_rhs`].
pub const MAX_BIJECTION_POINTS: usize = 7;

/// Continuous piecewise-linear function, zero outside its breakpoint span.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn eval(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        if bp.is_empty() || t <= bp[0].0 || t >= bp[bp.len() - 1].0 {
            return 0.0;
        }
        let i = bp.partition_point(|&(x, _)| x <= t);
        let (t0, y0) = bp[i - 1];
        let (t1, y1) = bp[i];
        if t == t0 {
            return y0;
        }
        y0 + (y1 - y0) * (t - t0) / (t1 - t0)
    }

    /// Exact `integral(self * other)` over the real line.
    pub fn inner(&self, other: &PiecewiseLinear) -> f64 {
        if self.breakpoints.is_empty() || other.breakpoints.is_empty() {
            return 0.0;
        }
        let lo = self.breakpoints[0].0.max(other.breakpoints[0].0);
        let hi = self.breakpoints[self.breakpoints.len() - 1].0.min(other.breakpoints[other.breakpoints.len() - 1].0);
        if lo >= hi {
            return 0.0;
        }
        let mut ts: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .map(|&(t, _)| t)
            .filter(|&t| t >= lo && t <= hi)
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let mut total = 0.0;
        for w in ts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (f0, f1) = (self.eval(a), self.eval(b));
            let (g0, g1) = (other.eval(a), other.eval(b));
            // written so that swapping f and g gives a bitwise identical sum
            total += (b - a) / 6.0 * (2.0 * (f0 * g0 + f1 * g1) + (f0 * g1 + f1 * g0));
        }
        total
    }
}

/// Landscape layers `lambda_1 >= lambda_2 >= ...`; only nonzero layers are stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Landscape {
    layers: Vec<PiecewiseLinear>,
}

impl Landscape {
    pub fn layers(&self) -> &[PiecewiseLinear] {
        &self.layers
    }

    /// `lambda_k(t)` with 1-based `k`; zero for absent layers.
    pub fn eval(&self, k: usize, t: f64) -> f64 {
        match k.checked_sub(1).and_then(|i| self.layers.get(i)) {
            Some(layer) => layer.eval(t),
            None => 0.0,
        }
    }

    pub fn inner(&self, other: &Landscape) -> f64 {
        self.layers.iter().zip(&other.layers).map(|(a, b)| a.inner(b)).sum()
    }

    /// CSV with header `layer,t,y`, one row per breakpoint, 1-based layers.
    pub fn to_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::from("layer,t,y\n");
        for (k, layer) in self.layers.iter().enumerate() {
            for &(t, y) in layer.breakpoints() {
                let _ = writeln!(out, "{},{},{}", k + 1, fmt(t), fmt(y));
            }
        }
        out
    }
}

fn tent(p: DiagramPoint, t: f64) -> f64 {
    (t - p.birth).min(p.death - t).max(0.0)
}

/// Exact landscape of a diagram.
///
/// Between two consecutive abscissae from {births, deaths, (b_i + d_j)/2}
/// every tent is linear and no two tents cross, so each layer is linear
/// there too and is determined by its values at those abscissae.
pub fn build_landscape(d: &PersistenceDiagram) -> Landscape {
    let pts: Vec<DiagramPoint> = d.off_diagonal().collect();
    if pts.is_empty() {
        return Landscape::default();
    }
    let mut ts: Vec<f64> = Vec::with_capacity(pts.len() * (pts.len() + 2));
    for p in &pts {
        ts.push(p.birth);
        ts.push(p.death);
        for q in &pts {
            let m = 0.5 * (p.birth + q.death);
            if m > p.birth && m < q.death {
                ts.push(m);
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(ts.len());
    let mut depth = 0;
    for &t in &ts {
        let mut vals: Vec<f64> = pts.iter().map(|&p| tent(p, t)).filter(|&v| v > 0.0).collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        depth = depth.max(vals.len());
        columns.push(vals);
    }

    let layers = (0..depth)
        .map(|k| {
            let raw: Vec<(f64, f64)> =
                ts.iter().zip(&columns).map(|(&t, col)| (t, col.get(k).copied().unwrap_or(0.0))).collect();
            PiecewiseLinear { breakpoints: trim_zero_runs(raw) }
        })
        .collect();
    Landscape { layers }
}

/// Trims the ends so that the first and last breakpoints are the only outer
/// zeros, then drops interior breakpoints where the slope does not change.
fn trim_zero_runs(raw: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let first = raw.iter().position(|&(_, y)| y > 0.0);
    let last = raw.iter().rposition(|&(_, y)| y > 0.0);
    let (Some(first), Some(last)) = (first, last) else {
        return Vec::new();
    };
    let span = &raw[first.saturating_sub(1)..=(last + 1).min(raw.len() - 1)];
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(span.len());
    for (i, &bp) in span.iter().enumerate() {
        let collinear = match (out.last(), span.get(i + 1)) {
            (Some(&(x0, y0)), Some(&(x2, y2))) => (bp.1 - y0) * (x2 - bp.0) == (y2 - bp.1) * (bp.0 - x0),
            _ => false,
        };
        if !collinear {
            out.push(bp);
        }
    }
    out
}

pub fn landscape_kernel(f: &PersistenceDiagram, g: &PersistenceDiagram) -> f64 {
    build_landscape(f).inner(&build_landscape(g))
}

pub fn landscape_distance(f: &PersistenceDiagram, g: &PersistenceDiagram) -> f64 {
    let (lf, lg) = (build_landscape(f), build_landscape(g));
    landscape_distance_between(&lf, &lg)
}

/// Distance between precomputed landscapes.
pub fn landscape_distance_between(lf: &Landscape, lg: &Landscape) -> f64 {
    (lf.inner(lf) + lg.inner(lg) - 2.0 * lf.inner(lg)).max(0.0).sqrt()
}

/// Right-hand side of the landscape stability bound,
/// `min_gamma sqrt( sum_u pers(u) |u - gamma(u)|^2 + (2/3) |u - gamma(u)|^3 )`
/// with sup-norm distances and `u` ranging over `F`.
///
/// Both diagrams are augmented with diagonal points. A point matched to the
/// diagonal goes to its nearest diagonal point; diagonal-to-diagonal pairs
/// cost nothing. Every partial injection between the off-diagonal points is
/// enumerated.
pub fn landscape_stability_rhs(f: &PersistenceDiagram, g: &PersistenceDiagram) -> Result<f64, LandscapeError> {
    let fp: Vec<DiagramPoint> = f.off_diagonal().collect();
    let gp: Vec<DiagramPoint> = g.off_diagonal().collect();
    for n in [fp.len(), gp.len()] {
        if n > MAX_BIJECTION_POINTS {
            return Err(LandscapeError::TooLarge { limit: MAX_BIJECTION_POINTS, found: n });
        }
    }
    let cost = |pers: f64, dist: f64| pers * dist * dist + 2.0 / 3.0 * dist.powi(3);
    let to_diag_f: Vec<f64> = fp.iter().map(|u| cost(u.persistence(), u.diagonal_distance())).collect();
    let from_diag_g: Vec<f64> = gp.iter().map(|v| cost(0.0, v.diagonal_distance())).collect();
    let pair: Vec<Vec<f64>> =
        fp.iter().map(|u| gp.iter().map(|&v| cost(u.persistence(), u.linf(v))).collect()).collect();

    let mut best = f64::INFINITY;
    let mut used = vec![false; gp.len()];
    search_injections(0, 0.0, &pair, &to_diag_f, &from_diag_g, &mut used, &mut best);
    Ok(best.max(0.0).sqrt())
}

fn search_injections(
    i: usize,
    acc: f64,
    pair: &[Vec<f64>],
    to_diag_f: &[f64],
    from_diag_g: &[f64],
    used: &mut [bool],
    best: &mut f64,
) {
    if i == pair.len() {
        let rest: f64 = used.iter().zip(from_diag_g).filter(|(u, _)| !**u).map(|(_, c)| c).sum();
        *best = best.min(acc + rest);
        return;
    }
    search_injections(i + 1, acc + to_diag_f[i], pair, to_diag_f, from_diag_g, used, best);
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            search_injections(i + 1, acc + pair[i][j], pair, to_diag_f, from_diag_g, used, best);
            used[j] = false;
        }
    }
}
