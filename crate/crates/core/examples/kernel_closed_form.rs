//! Scale-space kernel values, the induced distance, and the stability bound
//! against the 1-Wasserstein distance.
//!
//! Run with `cargo run --example kernel_closed_form`.

use std::f64::consts::PI;

use pssk::diagram::PersistenceDiagram;
use pssk::kernel::{pssk_distance, pssk_eval, KernelScale};
use pssk::matching::{wasserstein_distance, Exponent};

fn main() {
    let f = PersistenceDiagram::from_pairs(0, &[(0.0, 1.0)]).unwrap();
    let g = PersistenceDiagram::from_pairs(0, &[(0.0, 1.0), (0.5, 3.0), (1.0, 1.2)]).unwrap();
    for sigma in [0.05, 0.5, 2.0] {
        let s = KernelScale::new(sigma).unwrap();
        let d = pssk_distance(&f, &g, s);
        let bound = wasserstein_distance(&f, &g, Exponent::Finite(1.0)) / (2.0 * sigma * PI.sqrt());
        println!(
            "sigma {sigma:<5} k(F,F) {:.6e}  k(F,G) {:.6e}  d(F,G) {:.6}  <= W1 bound {:.6}",
            pssk_eval(&f, &f, s),
            pssk_eval(&f, &g, s),
            d,
            bound
        );
    }
}
