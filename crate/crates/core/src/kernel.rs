//! The persistence scale-space kernel.
//!
//! A diagram `D` is mapped to the solution at time `sigma` of the heat
//! equation on the half-plane above the diagonal, started from Dirac masses
//! at the points of `D` and held at zero on the diagonal. Mirroring every
//! point across the diagonal with a negative sign turns that into a free-space
//! problem, which gives the feature map
//!
//! ```text
//! phi(x) = 1/(4 pi sigma) * sum_p [ exp(-|x - p|^2 / 4 sigma) - exp(-|x - mirror(p)|^2 / 4 sigma) ]
//! ```
//!
//! and the kernel as the L2 inner product of two such maps:
//!
//! ```text
//! k(F, G) = 1/(8 pi sigma) * sum_{p in F, q in G} [ exp(-|p - q|^2 / 8 sigma) - exp(-|p - mirror(q)|^2 / 8 sigma) ]
//! ```
//!
//! Distances inside the kernel are Euclidean. The kernel is additive in
//! either argument and points on the diagonal contribute nothing.

use std::f64::consts::PI;

use thiserror::Error;

use crate::diagram::{canonical_order, PersistenceDiagram, PlanePoint};
use crate::persistence::GrayscaleImage;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("kernel scale must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("evaluation point ({x1}, {x2}) lies below the diagonal")]
    OutsideDomain { x1: f64, x2: f64 },
    #[error("bad raster grid: {0}")]
    BadGrid(String),
}

/// Diffusion time `sigma > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct KernelScale(f64);

impl KernelScale {
    pub fn new(sigma: f64) -> Result<Self, KernelError> {
        if sigma > 0.0 && sigma.is_finite() {
            Ok(Self(sigma))
        } else {
            Err(KernelError::NonPositiveScale(sigma))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for KernelScale {
    type Error = KernelError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

/// Kernel value `k_sigma(F, G)`. The double sum runs in canonical argument
/// order, so the result is reproducible bit for bit and exactly symmetric.
pub fn pssk_eval(f: &PersistenceDiagram, g: &PersistenceDiagram, sigma: KernelScale) -> f64 {
    let (f, g) = if canonical_order(f, g).is_gt() { (g, f) } else { (f, g) };
    let s8 = 8.0 * sigma.get();
    let mut sum = 0.0;
    for p in f.points() {
        let p = PlanePoint::from(*p);
        for q in g.points() {
            let q = PlanePoint::from(*q);
            sum += (-p.dist_sq(q) / s8).exp() - (-p.dist_sq(q.mirror()) / s8).exp();
        }
    }
    sum / (PI * s8)
}

/// Kernel-induced pseudometric `sqrt(k(F,F) + k(G,G) - 2 k(F,G))`, with
/// round-off below zero clamped.
pub fn pssk_distance(f: &PersistenceDiagram, g: &PersistenceDiagram, sigma: KernelScale) -> f64 {
    let sq = pssk_eval(f, f, sigma) + pssk_eval(g, g, sigma) - 2.0 * pssk_eval(f, g, sigma);
    sq.max(0.0).sqrt()
}

fn feature_map_unchecked(d: &PersistenceDiagram, sigma: f64, x: PlanePoint) -> f64 {
    let s4 = 4.0 * sigma;
    let sum: f64 = d
        .points()
        .iter()
        .map(|&p| {
            let p = PlanePoint::from(p);
            (-x.dist_sq(p) / s4).exp() - (-x.dist_sq(p.mirror()) / s4).exp()
        })
        .sum();
    sum / (PI * s4)
}

/// Feature map value `Phi_sigma(D)(x)` at a point on or above the diagonal.
pub fn feature_map_eval(d: &PersistenceDiagram, sigma: KernelScale, x: PlanePoint) -> Result<f64, KernelError> {
    if x.x2 < x.x1 {
        return Err(KernelError::OutsideDomain { x1: x.x1, x2: x.x2 });
    }
    Ok(feature_map_unchecked(d, sigma.get(), x))
}

/// Plot window for [`feature_map_raster`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterGrid {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl RasterGrid {
    /// Square window `[lo, hi]^2` sampled `n x n`.
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        Self { xmin: lo, xmax: hi, ymin: lo, ymax: hi, nx: n, ny: n }
    }

    fn validate(&self) -> Result<(), KernelError> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite());
        if !finite || self.xmax <= self.xmin || self.ymax <= self.ymin {
            return Err(KernelError::BadGrid(format!(
                "window [{}, {}] x [{}, {}] is empty",
                self.xmin, self.xmax, self.ymin, self.ymax
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(KernelError::BadGrid("grid needs at least one cell per axis".into()));
        }
        Ok(())
    }

    /// Center of cell `(row, col)`; row 0 is the top of the window (`ymax`).
    pub fn cell_center(&self, row: usize, col: usize) -> PlanePoint {
        let dx = (self.xmax - self.xmin) / self.nx as f64;
        let dy = (self.ymax - self.ymin) / self.ny as f64;
        PlanePoint::new(self.xmin + (col as f64 + 0.5) * dx, self.ymax - (row as f64 + 0.5) * dy)
    }
}

/// Samples the feature map at cell centers. Row 0 is `ymax`; cells whose
/// center lies below the diagonal are zero.
pub fn feature_map_raster(
    d: &PersistenceDiagram,
    sigma: KernelScale,
    grid: &RasterGrid,
) -> Result<GrayscaleImage, KernelError> {
    grid.validate()?;
    let mut pixels = Vec::with_capacity(grid.nx * grid.ny);
    for row in 0..grid.ny {
        for col in 0..grid.nx {
            let x = grid.cell_center(row, col);
            pixels.push(if x.x2 < x.x1 { 0.0 } else { feature_map_unchecked(d, sigma.get(), x) });
        }
    }
    Ok(GrayscaleImage::new(grid.ny, grid.nx, pixels).expect("raster shape matches grid"))
}
