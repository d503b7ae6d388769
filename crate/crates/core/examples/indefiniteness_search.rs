//! Searches random diagram sets for a Wasserstein distance matrix that is
//! not conditionally negative definite, for p = 1, 2 and infinity.
//!
//! Run with `cargo run --example indefiniteness_search -- [seed]`.

use pssk::learning::{indefiniteness_search, SearchOptions};
use pssk::matching::Exponent;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2024);
    for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
        let opts = SearchOptions::new(p, seed);
        match indefiniteness_search(&opts) {
            Ok(w) => {
                let r = &w.report_minus_d;
                println!(
                    "p = {p}: trial {}, {} diagrams, -d has {} positive / {} negative eigenvalues, cnd = {}",
                    w.trial,
                    w.diagrams.len(),
                    r.n_positive,
                    r.n_negative,
                    r.cnd
                );
                println!(
                    "  exp(-xi d) at xi = {}: min eigenvalue {:.3e} (max |eigenvalue| {:.3e})",
                    w.certifying_xi,
                    w.report_certifying.min_eigenvalue(),
                    w.report_certifying.max_abs_eigenvalue()
                );
                for (i, d) in w.diagrams.iter().enumerate().take(3) {
                    let pts: Vec<String> =
                        d.points().iter().map(|q| format!("({:.3}, {:.3})", q.birth, q.death)).collect();
                    println!("  D{i}: {}", pts.join(" "));
                }
            }
            Err(e) => println!("p = {p}: {e}"),
        }
    }
}
