//! Lower-star persistence of a function on a triangulated annulus.
//!
//! The inner ring of vertices carries value 0 and the outer ring carries
//! value 5, so the hole of the annulus is born at 0. The annulus is never
//! filled, so its loop is essential; closing it with a cap at height 5 turns
//! it into the finite pair (0, 5).
//!
//! Run with `cargo run --example mesh_lower_star`.

use pssk::persistence::{build_lower_star_filtration, compute_persistence, MeshWithFunction};

fn main() {
    let k = 8;
    let mut values = vec![0.0; k];
    values.extend(std::iter::repeat_n(5.0, k));
    values.push(5.0);
    let cap = 2 * k;
    let mut triangles = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        triangles.push([i, j, k + i]);
        triangles.push([j, k + j, k + i]);
        // cap over the inner boundary
        triangles.push([i, j, cap]);
    }
    let mesh = MeshWithFunction::new(values, triangles).unwrap();
    for d in compute_persistence(&build_lower_star_filtration(&mesh)) {
        let pts: Vec<String> = d.points().iter().map(|p| format!("({}, {})", p.birth, p.death)).collect();
        println!("dim {}: {}", d.dimension(), pts.join(" "));
    }
}
