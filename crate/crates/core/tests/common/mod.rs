#![allow(dead_code)]

use svdmark::analysis::GaussianStream;
use svdmark::Matrix;

/// Standard normal entries from a fixed seed.
pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut g = GaussianStream::new(seed);
    Matrix::from_fn(rows, cols, |_, _| g.next().unwrap())
}

/// Product of random Givens rotations: orthogonal by construction, no SVD involved.
pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    let mut g = GaussianStream::new(seed);
    let mut q = Matrix::identity(n);
    for _ in 0..3 {
        for p in 0..n {
            for r in p + 1..n {
                let theta = g.next().unwrap() * std::f64::consts::PI;
                let (c, s) = (theta.cos(), theta.sin());
                let rot = Matrix::from_fn(n, n, |i, j| match (i, j) {
                    _ if i == p && j == p => c,
                    _ if i == r && j == r => c,
                    _ if i == p && j == r => -s,
                    _ if i == r && j == p => s,
                    _ if i == j => 1.0,
                    _ => 0.0,
                });
                q = q.mat_mul(&rot).unwrap();
            }
        }
    }
    q
}

/// Pearson correlation of two equally long slices.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Eigenvalues of the symmetric 2x2 `[[a, b], [b, d]]`, descending.
pub fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> [f64; 2] {
    let mean = (a + d) / 2.0;
    let r = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    [mean + r, mean - r]
}

/// Eigenvalues of a symmetric 3x3 matrix by the trigonometric solution of
/// its characteristic cubic, descending.
pub fn sym3_eigenvalues(m: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = |i: usize, j: usize| (m[i][j] - if i == j { q } else { 0.0 }) / p;
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}
