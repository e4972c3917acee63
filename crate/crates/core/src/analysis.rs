//! Detection and quality metrics, plus the distortions used to model a
//! "possibly distorted" suspect image.
//!
//! Noise comes from [`Xoshiro256PlusPlus`] seeded with
//! `seed_from_u64(seed)`, one generator per call, and is shaped into
//! Gaussians with the Box–Muller transform. Each pair of uniforms yields two
//! normal deviates, consumed in row-major order. The same seed therefore
//! produces bit-identical noise on every platform.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::image::quantize_pixel;
use crate::liu_tan::check_same_shape;
use crate::matrix::Matrix;

/// Peak value of 8-bit intensities.
pub const PEAK_8BIT: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub ncc: f64,
    /// `f64::INFINITY` exactly when `mse == 0`.
    pub psnr_db: f64,
    pub mse: f64,
}

impl MetricReport {
    /// NCC, PSNR (peak 255) and MSE of `y` against `x`.
    pub fn compare(x: &Matrix, y: &Matrix) -> Result<Self> {
        Ok(Self {
            ncc: ncc(x, y)?,
            psnr_db: psnr(x, y, PEAK_8BIT)?,
            mse: mse(x, y)?,
        })
    }
}

/// Pearson correlation over all entries.
pub fn ncc(x: &Matrix, y: &Matrix) -> Result<f64> {
    check_same_shape("ncc", x, y)?;
    let (mx, my) = (x.mean(), y.mean());
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn mse(x: &Matrix, y: &Matrix) -> Result<f64> {
    check_same_shape("mse", x, y)?;
    let sum: f64 = x
        .as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / x.as_slice().len() as f64)
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` for identical inputs.
pub fn psnr(x: &Matrix, y: &Matrix, peak: f64) -> Result<f64> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::Precondition(format!("peak must be positive, got {peak}")));
    }
    let err = mse(x, y)?;
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / err).log10())
}

/// Endless stream of standard normal deviates.
pub struct GaussianStream {
    rng: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `(0, 1]` with 53 bits of precision.
    fn open_unit(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl Iterator for GaussianStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if let Some(z) = self.spare.take() {
            return Some(z);
        }
        let u1 = self.open_unit();
        let u2 = self.open_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        Some(r * theta.cos())
    }
}

/// Adds zero-mean Gaussian noise with standard deviation `sigma`.
pub fn distort_gaussian(m: &Matrix, sigma: f64, seed: u64) -> Result<Matrix> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Precondition(format!(
            "noise sigma must be nonnegative, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(m.clone());
    }
    let data = m
        .as_slice()
        .iter()
        .zip(GaussianStream::new(seed))
        .map(|(x, z)| x + sigma * z)
        .collect();
    Matrix::new(m.rows(), m.cols(), data)
}

/// Replaces the `height × width` rectangle at `(top, left)` with `fill`.
pub fn distort_crop(
    m: &Matrix,
    top: usize,
    left: usize,
    height: usize,
    width: usize,
    fill: f64,
) -> Result<Matrix> {
    let (rows, cols) = m.shape();
    let fits = top
        .checked_add(height)
        .is_some_and(|b| b <= rows)
        && left.checked_add(width).is_some_and(|r| r <= cols);
    if !fits {
        return Err(Error::OutOfBounds {
            top,
            left,
            height,
            width,
            rows,
            cols,
        });
    }
    if !fill.is_finite() {
        return Err(Error::NonFinite("distort_crop"));
    }
    let mut data = m.as_slice().to_vec();
    for i in top..top + height {
        data[i * cols + left..i * cols + left + width].fill(fill);
    }
    Matrix::new(rows, cols, data)
}

/// Round-trips every entry through an 8-bit pixel.
pub fn distort_quantize(m: &Matrix) -> Matrix {
    m.map(|x| f64::from(quantize_pixel(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> Matrix {
        Matrix::from_fn(4, 5, |i, j| (i * 5 + j) as f64 + ((i * j) as f64).sin())
    }

    #[test]
    fn ncc_examples() {
        let a = ramp();
        assert!((ncc(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert!((ncc(&a, &a.negate()).unwrap() + 1.0).abs() < 1e-15);
        let shifted = a.map(|x| x + 42.0);
        assert!((ncc(&a, &shifted).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ncc_rejects_constant_inputs() {
        let flat = Matrix::from_fn(4, 5, |_, _| 3.0);
        assert_eq!(ncc(&ramp(), &flat), Err(Error::UndefinedCorrelation));
        assert_eq!(ncc(&flat, &ramp()), Err(Error::UndefinedCorrelation));
        assert!(matches!(
            ncc(&ramp(), &ramp().transpose()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psnr_examples() {
        let a = ramp();
        assert_eq!(psnr(&a, &a, 255.0).unwrap(), f64::INFINITY);
        let far = a.map(|x| x + 255.0);
        assert!(psnr(&a, &far, 255.0).unwrap().abs() < 1e-12);
        let near = a.map(|x| x + 1.0);
        let expected = 10.0 * 65025f64.log10();
        assert!((psnr(&a, &near, 255.0).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 48.13).abs() < 0.005);
        assert!(psnr(&a, &near, 0.0).is_err());
    }

    #[test]
    fn report_sentinel() {
        let r = MetricReport::compare(&ramp(), &ramp()).unwrap();
        assert_eq!(r.mse, 0.0);
        assert!(r.psnr_db.is_infinite());
        assert!((r.ncc - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_noise_contract() {
        let a = ramp();
        assert_eq!(distort_gaussian(&a, 0.0, 9).unwrap(), a);
        assert_eq!(
            distort_gaussian(&a, 2.0, 9).unwrap(),
            distort_gaussian(&a, 2.0, 9).unwrap()
        );
        assert_ne!(
            distort_gaussian(&a, 2.0, 9).unwrap(),
            distort_gaussian(&a, 2.0, 10).unwrap()
        );
        assert!(distort_gaussian(&a, -1.0, 9).is_err());
    }

    #[test]
    fn noise_sample_mean_within_three_standard_errors() {
        let zero = Matrix::zeros(256, 256);
        let noisy = distort_gaussian(&zero, 5.0, 2024).unwrap();
        assert!(noisy.mean().abs() <= 5.0 * 3.0 / 256.0, "{}", noisy.mean());
    }

    #[test]
    fn crop_examples() {
        let a = ramp();
        assert_eq!(distort_crop(&a, 1, 1, 0, 0, 0.0).unwrap(), a);
        assert_eq!(distort_crop(&a, 0, 0, 4, 5, 0.0).unwrap(), Matrix::zeros(4, 5));

        let m = Matrix::from_fn(4, 4, |_, _| 1.0);
        let cropped = distort_crop(&m, 1, 2, 2, 2, 7.0).unwrap();
        let touched = cropped.as_slice().iter().filter(|&&x| x == 7.0).count();
        assert_eq!(touched, 4);
        assert_eq!(cropped.get(1, 2), 7.0);
        assert_eq!(cropped.get(2, 3), 7.0);
        assert_eq!(cropped.get(0, 2), 1.0);

        assert!(matches!(
            distort_crop(&m, 3, 0, 2, 1, 0.0),
            Err(Error::OutOfBounds { .. })
        ));
        assert!(distort_crop(&m, usize::MAX, 0, 2, 1, 0.0).is_err());
    }

    #[test]
    fn quantize_examples() {
        let ints = Matrix::from_fn(3, 3, |i, j| (i * 3 + j) as f64 * 20.0);
        assert_eq!(distort_quantize(&ints), ints);
        let half = Matrix::from_rows(&[[127.5]]).unwrap();
        assert_eq!(distort_quantize(&half).as_slice(), &[128.0]);
        let wild = Matrix::from_rows(&[[-4.2, 300.0, 12.49]]).unwrap();
        let once = distort_quantize(&wild);
        assert_eq!(once.as_slice(), &[0.0, 255.0, 12.0]);
        assert_eq!(distort_quantize(&once), once);
    }
}
