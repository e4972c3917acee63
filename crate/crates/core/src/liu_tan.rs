//! The Liu–Tan SVD watermarking scheme.
//!
//! The mark is added to the cover's singular value matrix, `S + αW`, and the
//! singular values of that sum replace the cover's own. The detector keeps
//! the singular vectors `U_w`, `V_w` of the sum together with the cover's `S`.
//!
//! Those keys say almost nothing about which mark was embedded: `U_w` and
//! `V_w` carry the geometry of the mark, and the only thing read from the
//! suspect image is a vector of singular values. Anyone can therefore build
//! keys for a mark of their choosing with [`lt_keygen`] and "find" it in an
//! image that never contained it. See [`lt_extract`].

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::{orthogonality_error, svd};

/// Maximum tolerated orthogonality error of stored singular vectors.
pub const KEY_ORTHOGONALITY_TOL: f64 = 1e-10;

/// Detector-side information for [`lt_extract`].
#[derive(Debug, Clone, PartialEq)]
pub struct LiuTanKeys {
    u_w: Matrix,
    v_w: Matrix,
    s_cover: Vec<f64>,
    alpha: f64,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "alpha must be positive and finite, got {alpha}"
        )))
    }
}

pub(crate) fn check_orthogonal(name: &str, m: &Matrix, dim: usize) -> Result<()> {
    if m.shape() != (dim, dim) {
        return Err(Error::Precondition(format!(
            "{name} must be {dim}x{dim}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let err = orthogonality_error(m)?;
    if err > KEY_ORTHOGONALITY_TOL {
        return Err(Error::Precondition(format!(
            "{name} is not orthogonal (error {err:e})"
        )));
    }
    Ok(())
}

pub(crate) fn check_singular_values(name: &str, values: &[f64], len: usize) -> Result<()> {
    if values.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: values.len(),
        });
    }
    let sorted = values.windows(2).all(|w| w[0] >= w[1]);
    if !sorted || values.iter().any(|&s| !(s >= 0.0 && s.is_finite())) {
        return Err(Error::Precondition(format!(
            "{name} must be finite, nonnegative and nonincreasing"
        )));
    }
    Ok(())
}

pub(crate) fn check_same_shape(op: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

impl LiuTanKeys {
    /// Assembles keys from stored parts, validating every invariant.
    pub fn new(u_w: Matrix, v_w: Matrix, s_cover: Vec<f64>, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let (m, n) = (u_w.rows(), v_w.rows());
        check_orthogonal("u_w", &u_w, m)?;
        check_orthogonal("v_w", &v_w, n)?;
        check_singular_values("s_cover", &s_cover, m.min(n))?;
        Ok(Self {
            u_w,
            v_w,
            s_cover,
            alpha,
        })
    }

    pub fn u_w(&self) -> &Matrix {
        &self.u_w
    }

    pub fn v_w(&self) -> &Matrix {
        &self.v_w
    }

    /// Diagonal of the cover's singular value matrix.
    pub fn s_cover(&self) -> &[f64] {
        &self.s_cover
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `(rows, cols)` of the cover these keys belong to.
    pub fn shape(&self) -> (usize, usize) {
        (self.u_w.rows(), self.v_w.rows())
    }
}

/// Decomposes `S + α·mark` where `S` holds the cover's singular values.
///
/// Returns the keys together with the singular values `S_w` of the sum,
/// which [`lt_embed`] writes into the cover.
pub fn lt_keygen(cover: &Matrix, mark: &Matrix, alpha: f64) -> Result<(LiuTanKeys, Vec<f64>)> {
    check_alpha(alpha)?;
    check_same_shape("lt_keygen", cover, mark)?;
    let s_cover = svd(cover)?.sigma().to_vec();
    keygen_from_sigma(s_cover, mark, alpha)
}

fn keygen_from_sigma(
    s_cover: Vec<f64>,
    mark: &Matrix,
    alpha: f64,
) -> Result<(LiuTanKeys, Vec<f64>)> {
    let (m, n) = mark.shape();
    let sum = Matrix::diag_from(&s_cover, m, n)?.add_scaled(alpha, mark)?;
    let (u_w, s_w, v_w) = svd(&sum)?.into_parts();
    let keys = LiuTanKeys {
        u_w,
        v_w,
        s_cover,
        alpha,
    };
    Ok((keys, s_w))
}

/// Embeds `mark` into `cover`: `A_w = U · diag(S_w) · Vᵀ`.
pub fn lt_embed(cover: &Matrix, mark: &Matrix, alpha: f64) -> Result<(Matrix, LiuTanKeys)> {
    check_alpha(alpha)?;
    check_same_shape("lt_embed", cover, mark)?;
    let (m, n) = cover.shape();
    let (u, s_cover, v) = svd(cover)?.into_parts();
    let (keys, s_w) = keygen_from_sigma(s_cover, mark, alpha)?;
    let watermarked = u
        .mat_mul(&Matrix::diag_from(&s_w, m, n)?)?
        .mat_mul(&v.transpose())?;
    Ok((watermarked, keys))
}

/// Extracts `W* = (U_w · diag(S*) · V_wᵀ − S) / α`, where `S*` are the
/// singular values of `suspect`.
///
/// Nothing here checks that the keys were produced for this image. With keys
/// forged for an arbitrary reference mark, the result is that reference with
/// errors concentrated on its diagonal.
pub fn lt_extract(suspect: &Matrix, keys: &LiuTanKeys) -> Result<Matrix> {
    let (m, n) = keys.shape();
    if suspect.shape() != (m, n) {
        return Err(Error::DimensionMismatch {
            op: "lt_extract",
            left: suspect.shape(),
            right: (m, n),
        });
    }
    let s_suspect = svd(suspect)?.sigma().to_vec();
    let d = keys
        .u_w
        .mat_mul(&Matrix::diag_from(&s_suspect, m, n)?)?
        .mat_mul(&keys.v_w.transpose())?;
    let s = Matrix::diag_from(&keys.s_cover, m, n)?;
    d.sub(&s)?.scale(1.0 / keys.alpha)
}
