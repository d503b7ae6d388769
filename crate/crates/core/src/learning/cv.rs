//! Stratified k-fold cross-validation of the precomputed-kernel SVM over a
//! grid of `C` values and kernel scales.

use rand::seq::SliceRandom;

use crate::diagram::PersistenceDiagram;
use crate::kernel::KernelScale;
use crate::seed::{stream_rng, STREAM_FOLDS};

use super::eigen::sym_eigenvalues;
use super::gram::{gram_matrix, KernelChoice};
use super::svm::{svm_train_with, SvmOptions};
use super::{LearningError, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    ScaleSpace,
    Landscape,
}

/// Accuracy of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct CvCell {
    pub c: f64,
    /// `None` for kernels without a scale.
    pub sigma: Option<f64>,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub best: CvCell,
    /// Every grid point, scales outermost, in grid order.
    pub cells: Vec<CvCell>,
    /// Best mean accuracy over `C` for each scale, in grid order.
    pub sigma_curve: Vec<(Option<f64>, f64)>,
    pub fold_of: Vec<usize>,
    pub warnings: Vec<String>,
}

impl CvReport {
    /// `sigma,accuracy` rows.
    pub fn curve_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::from("sigma,accuracy\n");
        for (s, a) in &self.sigma_curve {
            let s = s.map(&fmt).unwrap_or_else(|| "none".into());
            out.push_str(&format!("{s},{}\n", fmt(*a)));
        }
        out
    }
}

/// Fold index for every item. Classes are taken in ascending label order;
/// each class is shuffled and dealt round-robin, continuing where the
/// previous class stopped, so fold sizes differ by at most one.
pub fn stratified_folds(labels: &[i64], folds: usize, seed: u64) -> Result<Vec<usize>, LearningError> {
    let n = labels.len();
    if folds < 2 {
        return Err(LearningError::InvalidParameter(format!("need at least 2 folds, got {folds}")));
    }
    if folds > n {
        return Err(LearningError::TooFewItems(format!("{folds} folds for {n} items")));
    }
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if folds < n {
        for &c in &classes {
            let size = labels.iter().filter(|&&l| l == c).count();
            if size < folds {
                return Err(LearningError::TooFewItems(format!(
                    "class {c} has {size} items, fewer than {folds} folds"
                )));
            }
        }
    }
    let mut rng = stream_rng(seed, STREAM_FOLDS);
    let mut fold_of = vec![0; n];
    let mut next = 0;
    for &c in &classes {
        let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
        members.shuffle(&mut rng);
        for i in members {
            fold_of[i] = next % folds;
            next += 1;
        }
    }
    Ok(fold_of)
}

fn check_grid(name: &str, grid: &[f64]) -> Result<(), LearningError> {
    if grid.is_empty() {
        return Err(LearningError::InvalidParameter(format!("{name} grid is empty")));
    }
    if let Some(v) = grid.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(LearningError::InvalidParameter(format!("{name} grid value {v} is not positive")));
    }
    Ok(())
}

/// Cross-validation on diagrams; one Gram per scale.
#[allow(clippy::too_many_arguments)]
pub fn cross_validate(
    diagrams: &[PersistenceDiagram],
    labels: &[i64],
    family: KernelFamily,
    c_grid: &[f64],
    sigma_grid: &[f64],
    folds: usize,
    seed: u64,
    threads: usize,
) -> Result<CvReport, LearningError> {
    if diagrams.len() != labels.len() {
        return Err(LearningError::BadMatrix(format!("{} diagrams but {} labels", diagrams.len(), labels.len())));
    }
    check_grid("C", c_grid)?;
    stratified_folds(labels, folds, seed)?;
    let grams = match family {
        KernelFamily::ScaleSpace => {
            check_grid("sigma", sigma_grid)?;
            sigma_grid
                .iter()
                .map(|&s| {
                    let scale = KernelScale::new(s)?;
                    Ok((Some(s), gram_matrix(diagrams, KernelChoice::ScaleSpace(scale), threads).matrix))
                })
                .collect::<Result<Vec<_>, LearningError>>()?
        }
        KernelFamily::Landscape => vec![(None, gram_matrix(diagrams, KernelChoice::Landscape, threads).matrix)],
    };
    cross_validate_grams(&grams, labels, c_grid, folds, seed)
}

/// Cross-validation on precomputed Grams, one per scale.
pub fn cross_validate_grams(
    grams: &[(Option<f64>, SquareMatrix)],
    labels: &[i64],
    c_grid: &[f64],
    folds: usize,
    seed: u64,
) -> Result<CvReport, LearningError> {
    check_grid("C", c_grid)?;
    if grams.is_empty() {
        return Err(LearningError::InvalidParameter("no Gram matrices".into()));
    }
    let fold_of = stratified_folds(labels, folds, seed)?;
    let opts = SvmOptions { check_psd: false, ..SvmOptions::default() };
    let mut cells = Vec::new();
    let mut sigma_curve = Vec::new();
    let mut warnings = Vec::new();

    for (sigma, gram) in grams {
        if gram.n() != labels.len() {
            return Err(LearningError::BadMatrix(format!(
                "{} labels for a {}x{} Gram",
                labels.len(),
                gram.n(),
                gram.n()
            )));
        }
        let gram = regularize(gram, *sigma, &mut warnings)?;
        let mut curve_best = f64::NEG_INFINITY;
        for &c in c_grid {
            let mut fold_accuracies = Vec::with_capacity(folds);
            for f in 0..folds {
                let train: Vec<usize> = (0..labels.len()).filter(|&i| fold_of[i] != f).collect();
                let test: Vec<usize> = (0..labels.len()).filter(|&i| fold_of[i] == f).collect();
                let train_labels: Vec<i64> = train.iter().map(|&i| labels[i]).collect();
                let predict: Box<dyn Fn(usize) -> i64> = if train_labels.iter().all(|&l| l == train_labels[0]) {
                    let only = train_labels[0];
                    Box::new(move |_| only)
                } else {
                    let model = svm_train_with(&gram.select(&train), &train_labels, c, &opts)?;
                    let gram = &gram;
                    let train = &train;
                    Box::new(move |t| {
                        let row: Vec<f64> = train.iter().map(|&i| gram[(t, i)]).collect();
                        model.predict(&row)
                    })
                };
                let correct = test.iter().filter(|&&t| predict(t) == labels[t]).count();
                fold_accuracies.push(correct as f64 / test.len() as f64);
            }
            let mean_accuracy = fold_accuracies.iter().sum::<f64>() / folds as f64;
            curve_best = curve_best.max(mean_accuracy);
            cells.push(CvCell { c, sigma: *sigma, fold_accuracies, mean_accuracy });
        }
        sigma_curve.push((*sigma, curve_best));
    }

    let best = cells
        .iter()
        .fold(None::<&CvCell>, |best, cell| match best {
            Some(b) if !better(cell, b) => Some(b),
            _ => Some(cell),
        })
        .expect("grids are nonempty")
        .clone();
    Ok(CvReport { best, cells, sigma_curve, fold_of, warnings })
}

/// Higher mean accuracy wins; ties go to smaller `C`, then smaller scale.
fn better(a: &CvCell, b: &CvCell) -> bool {
    let key = |x: &CvCell| (x.c, x.sigma.unwrap_or(0.0));
    if a.mean_accuracy != b.mean_accuracy {
        return a.mean_accuracy > b.mean_accuracy;
    }
    let (ka, kb) = (key(a), key(b));
    ka.0 < kb.0 || (ka.0 == kb.0 && ka.1 < kb.1)
}

/// Shifts an indefinite Gram once, before any fold is trained.
fn regularize(
    gram: &SquareMatrix,
    sigma: Option<f64>,
    warnings: &mut Vec<String>,
) -> Result<SquareMatrix, LearningError> {
    let eig = sym_eigenvalues(gram)?;
    let scale = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min = eig.first().copied().unwrap_or(0.0);
    if min < -SvmOptions::default().psd_tol * scale {
        let shift = min.abs() + 1e-10;
        let at = sigma.map(|s| format!(" at sigma {s}")).unwrap_or_default();
        warnings.push(format!(
            "Gram{at} not positive semidefinite (min eigenvalue {min:e}); diagonal shifted by {shift:e}"
        ));
        return Ok(SquareMatrix::from_fn(gram.n(), |i, j| if i == j { gram[(i, j)] + shift } else { gram[(i, j)] }));
    }
    Ok(gram.clone())
}
