//! Persistence diagrams and kernels on them.
//!
//! - [`persistence`]: sublevel-set persistence of signals, images and meshes.
//! - [`diagram`]: the diagram type and its text format.
//! - [`kernel`]: the persistence scale-space kernel, its distance and feature map.
//! - [`landscape`]: persistence landscapes and their inner-product kernel.
//! - [`matching`]: Wasserstein and bottleneck distances by exact matching.
//! - [`learning`]: Gram matrices, definiteness analysis, SVM, cross-validation, retrieval.
//! - [`cli`]: the `pssk` command-line front end.
//!
//! ```
//! use pssk::diagram::PersistenceDiagram;
//! use pssk::kernel::{pssk_eval, KernelScale};
//!
//! let f = PersistenceDiagram::from_pairs(0, &[(0.0, 1.0)]).unwrap();
//! let k = pssk_eval(&f, &f, KernelScale::new(1.0).unwrap());
//! let exact = (1.0 - (-0.25f64).exp()) / (8.0 * std::f64::consts::PI);
//! assert!((k - exact).abs() < 1e-17);
//! ```

pub mod cli;
pub mod diagram;
pub mod kernel;
pub mod landscape;
pub mod learning;
pub mod matching;
pub mod persistence;
pub mod seed;
pub mod synthetic;
