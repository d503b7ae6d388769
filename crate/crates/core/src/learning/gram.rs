use std::fmt::Write as _;

use crate::diagram::PersistenceDiagram;
use crate::kernel::{pssk_distance, pssk_eval, KernelScale};
use crate::landscape::{build_landscape, landscape_distance_between, Landscape};
use crate::matching::{wasserstein_distance, Exponent};

use super::{LearningError, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelChoice {
    ScaleSpace(KernelScale),
    Landscape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceChoice {
    Wasserstein(Exponent),
    ScaleSpace(KernelScale),
    Landscape,
}

/// Symmetric matrix of pairwise kernel values with one id per item.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub matrix: SquareMatrix,
    pub ids: Vec<String>,
}

impl GramMatrix {
    /// Items are named `0..n` unless ids are supplied.
    pub fn new(matrix: SquareMatrix) -> Self {
        let ids = (0..matrix.n()).map(|i| i.to_string()).collect();
        Self { matrix, ids }
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Self {
        assert_eq!(ids.len(), self.matrix.n(), "one id per item");
        self.ids = ids;
        self
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// CSV: header row of ids, then one row of values per item.
    pub fn to_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = self.ids.join(",");
        out.push('\n');
        for i in 0..self.n() {
            let row: Vec<String> = self.matrix.row(i).iter().map(|&v| fmt(v)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, LearningError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((_, header)) = lines.next() else {
            return Ok(GramMatrix::new(SquareMatrix::zeros(0)));
        };
        let ids: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::with_capacity(ids.len());
        for (idx, line) in lines {
            let row = line
                .split(',')
                .map(|t| {
                    t.trim().parse::<f64>().map_err(|_| LearningError::Parse {
                        line: idx + 1,
                        message: format!("`{}` is not a number", t.trim()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != ids.len() {
                return Err(LearningError::Parse {
                    line: idx + 1,
                    message: format!("expected {} values, found {}", ids.len(), row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != ids.len() {
            return Err(LearningError::BadMatrix(format!("{} ids but {} rows", ids.len(), rows.len())));
        }
        let matrix = SquareMatrix::from_rows(&rows).expect("rows checked above");
        Ok(GramMatrix { matrix, ids })
    }
}

/// Evaluates `f(i, j)` once per unordered pair (including `i == j`) and
/// mirrors the result. Rows are dealt round-robin to `threads` workers; each
/// entry is computed independently, so the output does not depend on the
/// thread count.
pub(crate) fn pairwise(n: usize, threads: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(n);
    let threads = threads.max(1).min(n.max(1));
    let entries: Vec<(usize, usize, f64)> = if threads == 1 {
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| (i, j, f(i, j))).collect()
    } else {
        let f = &f;
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        for i in (t..n).step_by(threads) {
                            for j in i..n {
                                out.push((i, j, f(i, j)));
                            }
                        }
                        out
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    for (i, j, v) in entries {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    m
}

pub fn gram_matrix(diagrams: &[PersistenceDiagram], kernel: KernelChoice, threads: usize) -> GramMatrix {
    let matrix = match kernel {
        KernelChoice::ScaleSpace(sigma) => {
            pairwise(diagrams.len(), threads, |i, j| pssk_eval(&diagrams[i], &diagrams[j], sigma))
        }
        KernelChoice::Landscape => {
            let ls: Vec<Landscape> = diagrams.iter().map(build_landscape).collect();
            pairwise(ls.len(), threads, |i, j| ls[i].inner(&ls[j]))
        }
    };
    GramMatrix::new(matrix)
}

/// Pairwise distances with an exactly zero diagonal.
pub fn distance_matrix(diagrams: &[PersistenceDiagram], metric: DistanceChoice, threads: usize) -> GramMatrix {
    let n = diagrams.len();
    let matrix = match metric {
        DistanceChoice::Wasserstein(p) => {
            pairwise(n, threads, |i, j| if i == j { 0.0 } else { wasserstein_distance(&diagrams[i], &diagrams[j], p) })
        }
        DistanceChoice::ScaleSpace(sigma) => {
            pairwise(n, threads, |i, j| if i == j { 0.0 } else { pssk_distance(&diagrams[i], &diagrams[j], sigma) })
        }
        DistanceChoice::Landscape => {
            let ls: Vec<Landscape> = diagrams.iter().map(build_landscape).collect();
            pairwise(n, threads, |i, j| if i == j { 0.0 } else { landscape_distance_between(&ls[i], &ls[j]) })
        }
    };
    GramMatrix::new(matrix)
}

/// Precomputed-kernel text layout understood by common SVM tools:
/// `<label> 0:<i+1> 1:<K(i,1)> ... n:<K(i,n)>`, one line per item.
pub fn export_gram(g: &GramMatrix, labels: &[i64], fmt: impl Fn(f64) -> String) -> String {
    assert_eq!(labels.len(), g.n(), "one label per item");
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate().take(g.n()) {
        let _ = write!(out, "{label} 0:{}", i + 1);
        for (j, &v) in g.matrix.row(i).iter().enumerate() {
            let _ = write!(out, " {}:{}", j + 1, fmt(v));
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`export_gram`]; returns the matrix and the labels.
pub fn parse_precomputed(text: &str) -> Result<(SquareMatrix, Vec<i64>), LearningError> {
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| LearningError::Parse { line: idx + 1, message };
        let mut tokens = line.split_whitespace();
        let label = tokens.next().unwrap_or_default();
        labels.push(label.parse::<i64>().map_err(|_| err(format!("bad label `{label}`")))?);
        let mut row = Vec::new();
        for (k, tok) in tokens.enumerate() {
            let (key, value) = tok.split_once(':').ok_or_else(|| err(format!("bad entry `{tok}`")))?;
            let key: usize = key.parse().map_err(|_| err(format!("bad index `{key}`")))?;
            if key != k {
                return Err(err(format!("expected index {k}, found {key}")));
            }
            if k > 0 {
                row.push(value.parse::<f64>().map_err(|_| err(format!("bad value `{value}`")))?);
            }
        }
        rows.push(row);
    }
    let m = SquareMatrix::from_rows(&rows)
        .ok_or_else(|| LearningError::BadMatrix("precomputed kernel rows are not square".into()))?;
    Ok((m, labels))
}
