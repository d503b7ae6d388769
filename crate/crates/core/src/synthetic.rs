//! Seeded synthetic inputs.
//!
//! - Images of filled blobs and rings on a noisy background. Shapes are dark
//!   (low values) on a bright background, so the sublevel filtration of a ring
//!   encloses a hole that a blob does not have.
//! - Diagram classes that differ only in their low-persistence points.

use rand::Rng;

use crate::diagram::{DiagramPoint, PersistenceDiagram};
use crate::persistence::GrayscaleImage;
use crate::seed::{trial_rng, STREAM_SYNTHETIC};

pub const BLOB: i64 = 0;
pub const RING: i64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeParams {
    pub size: usize,
    /// Amplitude of the uniform pixel noise.
    pub noise: f64,
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self { size: 16, noise: 0.35 }
    }
}

fn render(p: &ShapeParams, rng: &mut impl Rng, inside: impl Fn(f64, f64) -> bool) -> GrayscaleImage {
    let n = p.size;
    let pixels = (0..n * n)
        .map(|i| {
            let (r, c) = ((i / n) as f64, (i % n) as f64);
            let base = if inside(r, c) { 0.0 } else { 1.0 };
            base + p.noise * rng.gen::<f64>()
        })
        .collect();
    GrayscaleImage::new(n, n, pixels).expect("shape matches size")
}

fn center(p: &ShapeParams, rng: &mut impl Rng) -> (f64, f64) {
    let mid = (p.size as f64 - 1.0) / 2.0;
    (mid + rng.gen_range(-1.0..1.0), mid + rng.gen_range(-1.0..1.0))
}

/// Filled disk of random radius near the image center.
pub fn blob_image(p: &ShapeParams, rng: &mut impl Rng) -> GrayscaleImage {
    let (cr, cc) = center(p, rng);
    let radius = p.size as f64 * rng.gen_range(0.22..0.32);
    render(p, rng, |r, c| (r - cr).hypot(c - cc) <= radius)
}

/// Annulus of random radius and a width of about two pixels.
pub fn ring_image(p: &ShapeParams, rng: &mut impl Rng) -> GrayscaleImage {
    let (cr, cc) = center(p, rng);
    let radius = p.size as f64 * rng.gen_range(0.22..0.32);
    let half_width = rng.gen_range(0.8..1.3);
    render(p, rng, |r, c| ((r - cr).hypot(c - cc) - radius).abs() <= half_width)
}

/// `per_class` blobs followed by `per_class` rings, labelled [`BLOB`] and [`RING`].
/// Image `i` uses its own random stream, so the set is reproducible from `seed`.
pub fn blobs_and_rings(per_class: usize, p: &ShapeParams, seed: u64) -> (Vec<GrayscaleImage>, Vec<i64>) {
    let mut images = Vec::with_capacity(2 * per_class);
    let mut labels = Vec::with_capacity(2 * per_class);
    for i in 0..2 * per_class {
        let mut rng = trial_rng(seed, STREAM_SYNTHETIC, i as u32);
        if i < per_class {
            images.push(blob_image(p, &mut rng));
            labels.push(BLOB);
        } else {
            images.push(ring_image(p, &mut rng));
            labels.push(RING);
        }
    }
    (images, labels)
}

/// Two classes of diagrams that differ only near the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct LowPersistenceQuartet {
    /// Class A.
    pub f: PersistenceDiagram,
    /// Class A.
    pub f_prime: PersistenceDiagram,
    /// Class B reference.
    pub g_prime: PersistenceDiagram,
    /// Class B query.
    pub g: PersistenceDiagram,
}

/// Every diagram holds one high-persistence point near `(0, 20)` and three
/// points of persistence about 0.4. Class A puts its low points near
/// `(2, 2.4), (5, 5.4), (8, 8.4)`, class B near `(3, 3.4), (6, 6.4), (9, 9.4)`.
/// The high point of the query `g` lies within 0.02 of that of `f`, while the
/// high points of `f_prime` and `g_prime` sit 0.3 to 0.4 away. Low points
/// jitter by at most 0.02.
pub fn low_persistence_quartet(seed: u64) -> LowPersistenceQuartet {
    let mut rng = crate::seed::stream_rng(seed, STREAM_SYNTHETIC);
    let mut jitter = |r: f64| rng.gen_range(-r..=r);
    let mut make = |high: (f64, f64), lows: [f64; 3]| {
        let mut pts = vec![DiagramPoint { birth: high.0, death: high.1 }];
        for b in lows {
            let b = b + jitter(0.02);
            pts.push(DiagramPoint { birth: b, death: b + 0.4 + jitter(0.02) });
        }
        PersistenceDiagram::new(1, pts)
    };
    let class_a = [2.0, 5.0, 8.0];
    let class_b = [3.0, 6.0, 9.0];
    let f = make((0.0, 20.0), class_a);
    let f_prime = make((0.3, 20.3), class_a);
    let g_prime = make((-0.3, 19.6), class_b);
    let g = make((0.01, 20.02), class_b);
    LowPersistenceQuartet { f, f_prime, g_prime, g }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::{build_cubical_filtration, compute_persistence};

    fn max_dim1_persistence(img: &GrayscaleImage) -> f64 {
        let d = compute_persistence(&build_cubical_filtration(img));
        d[1].points().iter().map(|p| p.persistence()).fold(0.0, f64::max)
    }

    #[test]
    fn rings_have_a_prominent_loop_and_blobs_do_not() {
        let p = ShapeParams::default();
        let (images, labels) = blobs_and_rings(5, &p, 11);
        for (img, &l) in images.iter().zip(&labels) {
            let m = max_dim1_persistence(img);
            if l == RING {
                assert!(m > 1.0 - p.noise, "ring loop persistence {m}");
            } else {
                assert!(m <= p.noise, "blob loop persistence {m}");
            }
        }
    }

    #[test]
    fn reproducible() {
        let p = ShapeParams::default();
        assert_eq!(blobs_and_rings(3, &p, 5), blobs_and_rings(3, &p, 5));
        assert_ne!(blobs_and_rings(3, &p, 5).0, blobs_and_rings(3, &p, 6).0);
    }
}
