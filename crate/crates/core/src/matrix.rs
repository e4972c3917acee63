//! Dense row-major `f64` matrices.
//!
//! Every operation returns a new matrix; inputs are never mutated. Entries are
//! guaranteed finite: constructors reject NaN and infinities, and operations
//! that could overflow report [`Error::NonFinite`] instead of returning them.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

fn ensure_finite(data: &[f64], op: &'static str) -> Result<()> {
    if data.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(op))
    }
}

impl Matrix {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        ensure_finite(&data, "Matrix::new")?;
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix by evaluating `f(row, col)` for every entry.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero or `f` returns a non-finite value.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data).expect("from_fn: invalid shape or non-finite entry")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Rectangular matrix with `values` on the main diagonal and zeros elsewhere.
    ///
    /// `values.len()` must equal `min(rows, cols)`.
    pub fn diag_from(values: &[f64], rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        let k = rows.min(cols);
        if values.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: values.len(),
            });
        }
        let mut data = vec![0.0; rows * cols];
        for (i, &v) in values.iter().enumerate() {
            data[i * cols + i] = v;
        }
        Self::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `(rows, cols)`.
    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Row-major view of the entries.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn check_same_shape(&self, other: &Matrix, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    /// Standard matrix product `self · rhs`.
    pub fn mat_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![0.0; m * n];
        // i-k-j order: the inner loop walks contiguous rows of both `rhs` and `out`.
        // Each out[i][j] still accumulates its k terms in ascending order.
        for i in 0..m {
            let out_row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                let rhs_row = &rhs.data[p * n..(p + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        ensure_finite(&out, "mat_mul")?;
        Ok(Matrix {
            rows: m,
            cols: n,
            data: out,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Elementwise `self + alpha · other`.
    pub fn add_scaled(&self, alpha: f64, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "add_scaled")?;
        if !alpha.is_finite() {
            return Err(Error::NonFinite("add_scaled"));
        }
        let data: Vec<f64> = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + alpha * b)
            .collect();
        ensure_finite(&data, "add_scaled")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, factor: f64) -> Result<Matrix> {
        let data: Vec<f64> = self.data.iter().map(|x| x * factor).collect();
        ensure_finite(&data, "scale")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn negate(&self) -> Matrix {
        self.map(|x| -x)
    }

    /// Applies a finite-preserving function to every entry.
    ///
    /// # Panics
    ///
    /// Panics if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let data: Vec<f64> = self.data.iter().map(|&x| f(x)).collect();
        assert!(
            data.iter().all(|x| x.is_finite()),
            "map produced a non-finite entry"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        // Scaled accumulation so that large pixel-domain matrices cannot overflow.
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let sum: f64 = self.data.iter().map(|x| (x / scale) * (x / scale)).sum();
        scale * sum.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Entries `a[i][i]` for `i < min(rows, cols)`.
    pub fn diag_of(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Relative Frobenius distance `‖a − b‖_F / ‖b‖_F`, or the absolute distance when `b` is zero.
pub fn relative_error(a: &Matrix, b: &Matrix) -> Result<f64> {
    let diff = a.sub(b)?.frobenius_norm();
    let norm = b.frobenius_norm();
    Ok(if norm == 0.0 { diff } else { diff / norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn mat_mul_examples() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(Matrix::identity(2).mat_mul(&a).unwrap(), a);

        let swap = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(swap.mat_mul(&a).unwrap(), m(&[&[3.0, 4.0], &[1.0, 2.0]]));

        let b = m(&[&[5.0, 6.0], &[7.0, 8.0]]);
        assert_eq!(a.mat_mul(&b).unwrap(), m(&[&[19.0, 22.0], &[43.0, 50.0]]));
    }

    #[test]
    fn mat_mul_rejects_bad_shapes() {
        let a = Matrix::zeros(2, 3);
        let err = a.mat_mul(&a).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                op: "mat_mul",
                left: (2, 3),
                right: (2, 3)
            }
        );
        assert!(err.to_string().contains("2x3 vs 2x3"));
    }

    #[test]
    fn mat_mul_overflow_is_an_error() {
        let big = m(&[&[1e200, 1e200]]);
        assert_eq!(
            big.mat_mul(&big.transpose()).unwrap_err(),
            Error::NonFinite("mat_mul")
        );
    }

    #[test]
    fn transpose_examples() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(a.transpose(), m(&[&[1.0, 3.0], &[2.0, 4.0]]));
        let row = m(&[&[1.0, 2.0, 3.0]]);
        let col = row.transpose();
        assert_eq!(col.shape(), (3, 1));
        assert_eq!(col.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn add_scaled_examples() {
        let s = Matrix::diag_from(&[10.0, 2.0], 2, 2).unwrap();
        let w = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(s.add_scaled(0.0, &w).unwrap(), s);
        assert_eq!(
            s.add_scaled(0.1, &w).unwrap(),
            m(&[&[10.0, 0.1], &[0.1, 2.0]])
        );
        assert_eq!(s.add_scaled(1.0, &s.negate()).unwrap(), Matrix::zeros(2, 2));
        assert!(matches!(
            s.add_scaled(1.0, &Matrix::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(Matrix::zeros(3, 3).frobenius_norm(), 0.0);
        assert_eq!(m(&[&[3.0, 4.0]]).frobenius_norm(), 5.0);
        for n in 1..6 {
            let got = Matrix::identity(n).frobenius_norm();
            assert!((got - (n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn diag_examples() {
        assert_eq!(Matrix::diag_from(&[5.0], 1, 1).unwrap(), m(&[&[5.0]]));
        assert_eq!(
            Matrix::diag_from(&[2.0, 3.0], 3, 2).unwrap(),
            m(&[&[2.0, 0.0], &[0.0, 3.0], &[0.0, 0.0]])
        );
        assert_eq!(
            Matrix::diag_from(&[1.0, 1.0, 1.0], 3, 3).unwrap(),
            Matrix::identity(3)
        );
        assert_eq!(Matrix::identity(3).diag_of(), vec![1.0; 3]);
        assert_eq!(
            m(&[&[2.0, 0.0], &[0.0, 3.0], &[0.0, 0.0]]).diag_of(),
            vec![2.0, 3.0]
        );
        assert_eq!(
            Matrix::diag_from(&[1.0], 2, 2).unwrap_err(),
            Error::LengthMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn constructors_reject_invalid_data() {
        assert!(matches!(
            Matrix::new(0, 3, vec![]),
            Err(Error::EmptyMatrix { .. })
        ));
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0; 3]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            Matrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
