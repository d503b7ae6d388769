//! Scale-space kernel versus landscape kernel.
//!
//! 1. `F = {(-l, l)}` and `G = {(-l + 1, l + 1)}`: the scale-space distance
//!    settles as `l` grows while the landscape distance grows like `sqrt(l)`.
//! 2. Two classes that differ only in low-persistence points: nearest-neighbor
//!    lookup under the scale-space distance finds the right class, under the
//!    landscape distance it follows the jitter of the dominant point.
//!
//! Run with `cargo run --example landscape_comparison`.

use pssk::diagram::PersistenceDiagram;
use pssk::kernel::{pssk_distance, KernelScale};
use pssk::landscape::landscape_distance;
use pssk::synthetic::low_persistence_quartet;

fn main() {
    let sigma = KernelScale::new(1.0).unwrap();
    println!("lambda   d_pssk               d_landscape / sqrt(lambda)");
    for lambda in [1.0f64, 2.0, 5.0, 10.0, 50.0, 100.0] {
        let f = PersistenceDiagram::from_pairs(1, &[(-lambda, lambda)]).unwrap();
        let g = PersistenceDiagram::from_pairs(1, &[(-lambda + 1.0, lambda + 1.0)]).unwrap();
        println!("{lambda:<8} {:<20} {}", pssk_distance(&f, &g, sigma), landscape_distance(&f, &g) / lambda.sqrt());
    }

    let q = low_persistence_quartet(1);
    let small = KernelScale::new(0.01).unwrap();
    let refs = [("F (A)", &q.f), ("F' (A)", &q.f_prime), ("G' (B)", &q.g_prime)];
    println!("\nquery G (class B)   d_pssk(sigma=0.01)   d_landscape");
    for (name, d) in refs {
        println!("{name:<19} {:<20.6} {:.6}", pssk_distance(&q.g, d, small), landscape_distance(&q.g, d));
    }
}
