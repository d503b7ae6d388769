//! Blobs versus rings: dim-1 diagrams of noisy synthetic images, a
//! scale-space Gram per sigma, and ten-fold cross-validation over (C, sigma).
//!
//! Run with `cargo run --release --example svm_classification -- [curve.csv]`.

use pssk::learning::{cross_validate, KernelFamily};
use pssk::persistence::{build_cubical_filtration, compute_persistence};
use pssk::synthetic::{blobs_and_rings, ShapeParams};

fn main() {
    let params = ShapeParams { noise: 0.8, ..ShapeParams::default() };
    let (images, labels) = blobs_and_rings(30, &params, 7);
    let diagrams: Vec<_> =
        images.iter().map(|img| compute_persistence(&build_cubical_filtration(img))[1].clone()).collect();

    let c_grid = [0.1, 1.0, 10.0, 100.0];
    let sigma_grid = [1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0];
    let report = cross_validate(&diagrams, &labels, KernelFamily::ScaleSpace, &c_grid, &sigma_grid, 10, 7, 1)
        .expect("cross-validation");

    println!("sigma      best accuracy over C");
    for (s, acc) in &report.sigma_curve {
        println!("{:<10} {:.3}", s.unwrap_or(f64::NAN), acc);
    }
    println!(
        "best: C = {}, sigma = {}, mean accuracy = {:.3}",
        report.best.c,
        report.best.sigma.unwrap_or(f64::NAN),
        report.best.mean_accuracy
    );
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, report.curve_csv(|v| v.to_string())).expect("write curve");
        println!("curve written to {path}");
    }
}
