//! Rasterizes the scale-space feature map of a diagram and prints it as
//! ASCII shading (row 0 is the top of the window).
//!
//! Run with `cargo run --example feature_map_raster -- [sigma]`.

use pssk::diagram::PersistenceDiagram;
use pssk::kernel::{feature_map_raster, KernelScale, RasterGrid};

fn main() {
    let sigma: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let d = PersistenceDiagram::from_pairs(1, &[(0.2, 1.6), (0.6, 1.0), (1.2, 1.5)]).unwrap();
    let grid = RasterGrid::square(0.0, 2.0, 40);
    let img = feature_map_raster(&d, KernelScale::new(sigma).unwrap(), &grid).unwrap();
    let max = img.pixels().iter().copied().fold(0.0, f64::max);
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for r in 0..img.rows() {
        let line: String = (0..img.cols())
            .map(|c| {
                let v = img.get(r, c).max(0.0) / max;
                shades[((v * 9.0).round() as usize).min(9)]
            })
            .collect();
        println!("{line}");
    }
    println!("sigma = {sigma}, max value = {max:.4}");
}
