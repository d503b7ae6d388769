//! Cubical persistence of grayscale images: a 3x3 ring and a noisy synthetic ring.
//!
//! Run with `cargo run --example image_persistence`.

use pssk::persistence::{build_cubical_filtration, compute_persistence, GrayscaleImage};
use pssk::seed::{stream_rng, STREAM_SYNTHETIC};
use pssk::synthetic::{ring_image, ShapeParams};

fn report(name: &str, img: &GrayscaleImage) {
    let complex = build_cubical_filtration(img);
    let diagrams = compute_persistence(&complex);
    println!("{name}: {} cells", complex.len());
    for d in &diagrams {
        let top: Vec<String> = {
            let mut pts = d.points().to_vec();
            pts.sort_by(|a, b| b.persistence().total_cmp(&a.persistence()));
            pts.iter().take(3).map(|p| format!("({:.3}, {:.3})", p.birth, p.death)).collect()
        };
        println!("  dim {}: {} points, most persistent {}", d.dimension(), d.len(), top.join(" "));
    }
}

fn main() {
    let ring = GrayscaleImage::new(3, 3, vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    report("3x3 ring", &ring);
    let mut rng = stream_rng(5, STREAM_SYNTHETIC);
    report("16x16 noisy ring", &ring_image(&ShapeParams::default(), &mut rng));
}
