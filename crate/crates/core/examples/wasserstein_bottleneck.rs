//! Wasserstein and bottleneck distances, checked against brute force on a
//! small pair.
//!
//! Run with `cargo run --example wasserstein_bottleneck`.

use pssk::diagram::PersistenceDiagram;
use pssk::matching::{bottleneck_distance, wasserstein_bruteforce, wasserstein_distance, Exponent};

fn main() {
    let f = PersistenceDiagram::from_pairs(0, &[(0.0, 10.0), (1.0, 2.0), (3.0, 3.5)]).unwrap();
    let g = PersistenceDiagram::from_pairs(0, &[(0.5, 9.0), (2.5, 3.5)]).unwrap();
    for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
        let fast = wasserstein_distance(&f, &g, p);
        let slow = wasserstein_bruteforce(&f, &g, p).unwrap();
        println!("p = {p:<3}  matching {fast:.12}  brute force {slow:.12}");
    }
    let empty = PersistenceDiagram::empty(0);
    println!("bottleneck to the empty diagram: {}", bottleneck_distance(&f, &empty));
}
