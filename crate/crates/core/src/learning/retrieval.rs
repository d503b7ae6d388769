//! Shape-retrieval measures over a distance matrix: nearest neighbor, first
//! and second tier, E-measure and normalized discounted cumulative gain.

use super::{LearningError, SquareMatrix};

/// Number of top-ranked items the E-measure looks at.
pub const EM_CUTOFF: usize = 32;

/// Fractions in `[0, 1]`. Tier, E-measure and DCG average over queries
/// whose class has another member; they are `None` when no such query exists.
#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalScores {
    pub nn: f64,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub em: Option<f64>,
    pub dcg: Option<f64>,
    pub n_queries: usize,
    pub n_scored: usize,
}

impl RetrievalScores {
    /// `measure,percent` rows; undefined measures print `undefined`.
    pub fn to_table(&self, fmt: impl Fn(f64) -> String) -> String {
        let pct = |v: Option<f64>| v.map(|x| fmt(100.0 * x)).unwrap_or_else(|| "undefined".into());
        format!(
            "measure,percent\nNN,{}\nT1,{}\nT2,{}\nEM,{}\nDCG,{}\n",
            pct(Some(self.nn)),
            pct(self.t1),
            pct(self.t2),
            pct(self.em),
            pct(self.dcg)
        )
    }
}

pub fn retrieval_eval(d: &SquareMatrix, labels: &[i64]) -> Result<RetrievalScores, LearningError> {
    let n = d.n();
    if labels.len() != n {
        return Err(LearningError::BadMatrix(format!("{} labels for a {n}x{n} matrix", labels.len())));
    }
    if n < 2 {
        return Err(LearningError::TooFewItems(format!("retrieval needs at least 2 items, got {n}")));
    }
    for i in 0..n {
        if d[(i, i)] != 0.0 {
            return Err(LearningError::BadMatrix(format!("nonzero diagonal at {i}")));
        }
        for j in 0..n {
            if !d[(i, j)].is_finite() {
                return Err(LearningError::BadMatrix(format!("non-finite entry at ({i}, {j})")));
            }
            if d[(i, j)] != d[(j, i)] {
                return Err(LearningError::BadMatrix(format!("not symmetric at ({i}, {j})")));
            }
        }
    }

    let mut nn_hits = 0usize;
    let (mut t1, mut t2, mut em, mut dcg) = (0.0, 0.0, 0.0, 0.0);
    let mut scored = 0usize;
    for q in 0..n {
        let mut ranked: Vec<usize> = (0..n).filter(|&i| i != q).collect();
        ranked.sort_by(|&a, &b| d[(q, a)].total_cmp(&d[(q, b)]).then(a.cmp(&b)));
        let rel: Vec<bool> = ranked.iter().map(|&i| labels[i] == labels[q]).collect();
        let c = rel.iter().filter(|&&r| r).count();
        if rel[0] {
            nn_hits += 1;
        }
        if c == 0 {
            continue;
        }
        scored += 1;
        let hits = |k: usize| rel[..k.min(rel.len())].iter().filter(|&&r| r).count() as f64;
        t1 += hits(c) / c as f64;
        t2 += hits(2 * c) / c as f64;

        let k = EM_CUTOFF.min(n - 1);
        let h = hits(k);
        if h > 0.0 {
            let (p, r) = (h / k as f64, h / c as f64);
            em += 2.0 * p * r / (p + r);
        }

        let gain = |i: usize| if i == 0 { 1.0 } else { 1.0 / ((i + 1) as f64).log2() };
        let got: f64 = rel.iter().enumerate().filter(|(_, &r)| r).map(|(i, _)| gain(i)).sum();
        let ideal: f64 = (0..c).map(gain).sum();
        dcg += got / ideal;
    }
    let avg = |s: f64| (scored > 0).then(|| s / scored as f64);
    Ok(RetrievalScores {
        nn: nn_hits as f64 / n as f64,
        t1: avg(t1),
        t2: avg(t2),
        em: avg(em),
        dcg: avg(dcg),
        n_queries: n,
        n_scored: scored,
    })
}
