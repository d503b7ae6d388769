//! Kernel-learning harness: Gram matrices, symmetric eigen-analysis,
//! (conditional) definiteness checks, a precomputed-kernel C-SVM with
//! cross-validation, and retrieval measures.

mod cv;
mod definiteness;
mod eigen;
mod gram;
mod matrix;
mod retrieval;
mod svm;

use thiserror::Error;

pub use cv::{cross_validate, cross_validate_grams, stratified_folds, CvCell, CvReport, KernelFamily};
pub use definiteness::{
    definiteness_check, indefiniteness_search, random_diagram, DefinitenessReport, IndefinitenessWitness, SearchOptions,
};
pub use eigen::sym_eigenvalues;
pub use gram::{
    distance_matrix, export_gram, gram_matrix, parse_precomputed, DistanceChoice, GramMatrix, KernelChoice,
};
pub use matrix::SquareMatrix;
pub use retrieval::{retrieval_eval, RetrievalScores, EM_CUTOFF};
pub use svm::{svm_train, svm_train_with, BinarySvm, SvmModel, SvmOptions};

use crate::kernel::KernelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearningError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("SMO solver did not converge within {0} iterations")]
    SolverNoConvergence(usize),
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("too few items: {0}")]
    TooFewItems(String),
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no witness found within {0} trials")]
    SearchExhausted(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
