//! Sublevel persistence of a sampled signal.
//!
//! Run with `cargo run --example persistence_1d -- [signal.txt]`; without an
//! argument a short built-in signal is used.

use pssk::diagram::write_diagram;
use pssk::persistence::io::read_signal;
use pssk::persistence::{build_path_filtration, compute_persistence_dim0, ScalarField1D};

fn main() {
    let signal = match std::env::args().nth(1) {
        Some(path) => read_signal(&std::fs::read_to_string(&path).expect("read signal")).expect("parse signal"),
        None => ScalarField1D::new(vec![2.0, 0.0, 3.0, 1.0, 4.0, 0.5, 2.5]).unwrap(),
    };
    let complex = build_path_filtration(&signal);
    let d = compute_persistence_dim0(&complex);
    println!("signal: {:?}", signal.values());
    println!("{} finite pairs (the global minimum is essential and omitted):", d.len());
    print!("{}", write_diagram(&d));
}
