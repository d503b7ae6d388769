//! Retrieval measures on synthetic blob and ring images under three distances.
//!
//! Run with `cargo run --example shape_retrieval`.

use pssk::kernel::KernelScale;
use pssk::learning::{distance_matrix, retrieval_eval, DistanceChoice};
use pssk::matching::Exponent;
use pssk::persistence::{build_cubical_filtration, compute_persistence};
use pssk::synthetic::{blobs_and_rings, ShapeParams};

fn main() {
    let params = ShapeParams { noise: 0.8, ..ShapeParams::default() };
    let (images, labels) = blobs_and_rings(10, &params, 3);
    let diagrams: Vec<_> =
        images.iter().map(|img| compute_persistence(&build_cubical_filtration(img))[1].clone()).collect();
    let choices = [
        ("pssk sigma=0.03", DistanceChoice::ScaleSpace(KernelScale::new(0.03).unwrap())),
        ("landscape", DistanceChoice::Landscape),
        ("W1", DistanceChoice::Wasserstein(Exponent::Finite(1.0))),
    ];
    for (name, choice) in choices {
        let d = distance_matrix(&diagrams, choice, 1);
        let s = retrieval_eval(&d.matrix, &labels).unwrap();
        println!("{name}");
        print!("{}", s.to_table(|v| format!("{v:.1}")));
    }
}
