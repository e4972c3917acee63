//! Seeded synthetic test images with natural-image statistics.
//!
//! White Gaussian noise is blurred at a few nearby scales and the layers are
//! summed at equal variance, giving a smooth field with a falling spectrum.
//! The field is then stretched to the full `[0, 255]` range.
//!
//! Correlation lengths stay short relative to the image. Fields dominated by
//! image-wide trends share nearly the same leading singular vectors, and that
//! shared rank-one structure alone correlates any two of them.

use crate::analysis::GaussianStream;
use crate::matrix::Matrix;

/// Blur radii of the summed layers, in pixels.
const LAYERS: [usize; 3] = [1, 2, 3];

/// A `rows × cols` smooth random field in `[0, 255]`, fully determined by `seed`.
pub fn smooth_field(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut total = vec![0.0; rows * cols];
    let mut noise = GaussianStream::new(seed);
    for radius in LAYERS {
        let white: Vec<f64> = noise.by_ref().take(rows * cols).collect();
        let blurred = box_blur(&box_blur(&white, rows, cols, radius), rows, cols, radius);
        let spread = std_dev(&blurred);
        for (t, b) in total.iter_mut().zip(&blurred) {
            *t += b / spread;
        }
    }
    let lo = total.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = total.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let data = total.iter().map(|x| 255.0 * (x - lo) / (hi - lo)).collect();
    Matrix::new(rows, cols, data).expect("finite field")
}

fn std_dev(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64;
    var.sqrt().max(f64::MIN_POSITIVE)
}

/// Separable box blur with edge clamping.
fn box_blur(src: &[f64], rows: usize, cols: usize, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let clamp = |x: isize, len: usize| x.clamp(0, len as isize - 1) as usize;
    let width = (2 * radius + 1) as f64;
    let mut horiz = vec![0.0; src.len()];
    for i in 0..rows {
        for j in 0..cols {
            let sum: f64 = (-r..=r)
                .map(|d| src[i * cols + clamp(j as isize + d, cols)])
                .sum();
            horiz[i * cols + j] = sum / width;
        }
    }
    let mut out = vec![0.0; src.len()];
    for i in 0..rows {
        for j in 0..cols {
            let sum: f64 = (-r..=r)
                .map(|d| horiz[clamp(i as isize + d, rows) * cols + j])
                .sum();
            out[i * cols + j] = sum / width;
        }
    }
    out
}
