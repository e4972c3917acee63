//! Canonical full SVD via one-sided (Hestenes) Jacobi rotations.
//!
//! The decomposition is computed on the taller orientation of the input; a
//! wide matrix is transposed first and the factors swapped on return. The
//! output is made unique up to degenerate singular values by three rules:
//!
//! * singular values are sorted nonincreasing (stable in the original column order),
//! * values below `1e-12 · σ_max` are clamped to exactly zero,
//! * every column of `U` has its largest-magnitude entry nonnegative (lowest
//!   row wins on exact ties) and the paired column of `V` is flipped with it.
//!
//! Left singular vectors that are not determined by the data (null space,
//! clamped values, the extra columns of a tall matrix) are completed by
//! Gram–Schmidt against the standard basis in index order, so the whole
//! triple is a deterministic function of the input bits.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Rotation threshold on `|a_p·a_q| / (‖a_p‖‖a_q‖)`.
const ROTATION_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 60;
/// Singular values below this fraction of the largest are clamped to zero.
const RANK_TOL: f64 = 1e-12;
/// Columns with norm below this fraction of `‖A‖_F` are treated as zero during sweeps.
const NEGLIGIBLE_COLUMN: f64 = 1e-14;

/// A full singular value decomposition `A = U · diag(σ) · Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdTriple {
    u: Matrix,
    sigma: Vec<f64>,
    v: Matrix,
}

impl SvdTriple {
    /// Left singular vectors, `m × m`.
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    /// Singular values, `min(m, n)` of them, nonincreasing.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Right singular vectors, `n × n`.
    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// Shape `(m, n)` of the decomposed matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }

    pub fn into_parts(self) -> (Matrix, Vec<f64>, Matrix) {
        (self.u, self.sigma, self.v)
    }

    /// `U · diag(σ) · Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = self.shape();
        let s = Matrix::diag_from(&self.sigma, m, n).expect("sigma length matches shape");
        self.u
            .mat_mul(&s)
            .and_then(|us| us.mat_mul(&self.v.transpose()))
            .expect("factors of a finite decomposition multiply to a finite matrix")
    }
}

/// Column-major scratch matrix; Jacobi rotations act on whole columns.
struct Columns {
    len: usize,
    data: Vec<f64>,
}

impl Columns {
    fn from_matrix(a: &Matrix) -> Self {
        Self {
            len: a.rows(),
            data: a.transpose().into_vec(),
        }
    }

    fn identity(n: usize) -> Self {
        Self::from_matrix(&Matrix::identity(n))
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.len..(j + 1) * self.len]
    }

    fn pair_mut(&mut self, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(p < q);
        let (head, tail) = self.data.split_at_mut(q * self.len);
        (&mut head[p * self.len..(p + 1) * self.len], &mut tail[..self.len])
    }

    fn rotate(&mut self, p: usize, q: usize, c: f64, s: f64) {
        let (cp, cq) = self.pair_mut(p, q);
        for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = c * a - s * b;
            *y = s * a + c * b;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Computes the canonical SVD of `a`.
pub fn svd(a: &Matrix) -> Result<SvdTriple> {
    let (m, n) = a.shape();
    if m >= n {
        let (u, sigma, v) = tall_svd(a)?;
        Ok(canonicalize(u, sigma, v))
    } else {
        let (u_t, sigma, v_t) = tall_svd(&a.transpose())?;
        Ok(canonicalize(v_t, sigma, u_t))
    }
}

/// SVD of a matrix with `rows >= cols`, before sign canonicalization.
/// Returns `U` and `V` as row-major matrices.
fn tall_svd(a: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut work = Columns::from_matrix(a);
    let mut v = Columns::identity(n);

    let floor = {
        let t = NEGLIGIBLE_COLUMN * a.frobenius_norm();
        t * t
    };

    let mut converged = n == 1;
    let mut residual = 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        residual = 0.0f64;
        // Squared column norms, refreshed every sweep and updated in closed form per rotation.
        let mut sq: Vec<f64> = (0..n).map(|j| dot(work.col(j), work.col(j))).collect();
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (alpha, beta) = (sq[p], sq[q]);
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot(work.col(p), work.col(q));
                let off = gamma.abs() / (alpha * beta).sqrt();
                residual = residual.max(off);
                if off <= ROTATION_TOL {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                work.rotate(p, q, c, s);
                v.rotate(p, q, c, s);
                sq[p] = alpha - t * gamma;
                sq[q] = beta + t * gamma;
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual,
        });
    }

    let norms: Vec<f64> = (0..n).map(|j| norm(work.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal norms keep their column order.
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma_max = norms[order[0]];
    let mut sigma = Vec::with_capacity(n);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    for &j in &order {
        let s = norms[j];
        if s > 0.0 && s >= RANK_TOL * sigma_max {
            sigma.push(s);
            u_cols.push(work.col(j).iter().map(|x| x / s).collect());
        } else {
            sigma.push(0.0);
        }
    }
    let accepted = u_cols.len();
    complete_basis(&mut u_cols, m)?;

    // Accepted columns lead in sigma order, so clamped values index into the completion.
    let mut u = vec![0.0; m * m];
    for (j, col) in u_cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            u[i * m + j] = x;
        }
    }
    debug_assert!(sigma[..accepted].iter().all(|&s| s > 0.0));
    debug_assert!(sigma[accepted..].iter().all(|&s| s == 0.0));

    let mut vr = vec![0.0; n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for (i, &x) in v.col(old_j).iter().enumerate() {
            vr[i * n + new_j] = x;
        }
    }
    Ok((Matrix::new(m, m, u)?, sigma, Matrix::new(n, n, vr)?))
}

/// Extends orthonormal `cols` to a basis of `R^dim` with standard basis
/// vectors in index order, orthogonalized twice by modified Gram–Schmidt.
fn complete_basis(cols: &mut Vec<Vec<f64>>, dim: usize) -> Result<()> {
    // A candidate is kept when its residual exceeds this. Some candidate
    // always does while dim < 10^4: rejected residuals sum to under dim·1e-4.
    const ACCEPT: f64 = 1e-2;
    let mut candidate = 0;
    while cols.len() < dim {
        if candidate == dim {
            return Err(Error::Precondition(
                "orthonormal completion ran out of candidates".into(),
            ));
        }
        let mut r = vec![0.0; dim];
        r[candidate] = 1.0;
        candidate += 1;
        for _ in 0..2 {
            for c in cols.iter() {
                let proj = dot(c, &r);
                for (x, y) in r.iter_mut().zip(c) {
                    *x -= proj * y;
                }
            }
        }
        let len = norm(&r);
        if len > ACCEPT {
            r.iter_mut().for_each(|x| *x /= len);
            cols.push(r);
        }
    }
    Ok(())
}

/// Index of the largest-magnitude entry, lowest index on exact ties.
fn dominant_index(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, x) in values.enumerate() {
        if x.abs() > best.1 {
            best = (i, x.abs());
        }
    }
    best.0
}

fn flip_column(data: &mut [f64], cols: usize, j: usize) {
    for row in data.chunks_mut(cols) {
        row[j] = -row[j];
    }
}

fn canonicalize(u: Matrix, sigma: Vec<f64>, v: Matrix) -> SvdTriple {
    let (m, n) = (u.rows(), v.rows());
    let k = m.min(n);
    let mut ud = u.into_vec();
    let mut vd = v.into_vec();

    for j in 0..m {
        let i = dominant_index((0..m).map(|i| ud[i * m + j]));
        if ud[i * m + j] < 0.0 {
            flip_column(&mut ud, m, j);
            if j < k {
                flip_column(&mut vd, n, j);
            }
        }
    }
    // Null-space columns of V have no partner in U; apply the same rule to them alone.
    for j in k..n {
        let i = dominant_index((0..n).map(|i| vd[i * n + j]));
        if vd[i * n + j] < 0.0 {
            flip_column(&mut vd, n, j);
        }
    }

    SvdTriple {
        u: Matrix::new(m, m, ud).expect("finite"),
        sigma,
        v: Matrix::new(n, n, vd).expect("finite"),
    }
}

/// Max-abs entry of `mᵀm − I`.
pub fn orthogonality_error(m: &Matrix) -> Result<f64> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let gram = m.transpose().mat_mul(m)?;
    let mut worst = 0.0f64;
    for i in 0..cols {
        for j in 0..cols {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram.get(i, j) - target).abs());
        }
    }
    Ok(worst)
}
