//! Sublevel-set persistence for signals, images and meshes.
//!
//! Filtrations are built with the lower-star rule (a cell enters at the max of
//! its vertex values) and reduced over Z/2. Diagrams never contain essential
//! classes or zero-persistence pairs.

mod filtration;
pub mod io;
mod reduction;
mod union_find;

use thiserror::Error;

pub use filtration::{
    build_cubical_filtration, build_lower_star_filtration, build_path_filtration, Cell, FilteredComplex,
    GrayscaleImage, MeshWithFunction, ScalarField1D,
};
pub use reduction::{compute_persistence, persistence_pairs};
pub use union_find::compute_persistence_dim0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PersistenceError {
    #[error("input is empty")]
    EmptyInput,
    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },
    #[error("expected {expected} values, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("triangle {triangle} references vertex {vertex}, but the mesh has {n_vertices} vertices")]
    BadIndex { triangle: usize, vertex: usize, n_vertices: usize },
    #[error("triangle {triangle} repeats a vertex")]
    DegenerateTriangle { triangle: usize },
    #[error("invalid filtered complex: {0}")]
    InvalidComplex(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
