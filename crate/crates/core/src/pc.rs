//! Principal-components SVD watermarking.
//!
//! Embedding splits the mark as `W = (U_w S_w) V_wᵀ` and adds the principal
//! components `A_wa = U_w S_w` to the cover's singular value matrix:
//!
//! ```text
//! S₁  = S + α·A_wa
//! A_w = U · S₁ · Vᵀ
//! ```
//!
//! Extraction peels the cover back off and projects onto the cover's singular
//! vectors to recover `A_wa*`, then needs `V_w` to turn those components back
//! into an image. The right singular vectors of some other reference image
//! do not fit the recovered components, so a reference search with a mark
//! that was never embedded produces noise instead of the reference.

use crate::error::{Error, Result};
use crate::liu_tan::{check_alpha, check_orthogonal, check_same_shape, check_singular_values};
use crate::matrix::Matrix;
use crate::svd::svd;

/// Detector-side information for [`pc_extract`]: the cover's SVD and the
/// mark's right singular vectors. `U_w` and `S_w` are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct PcKeys {
    u: Matrix,
    sigma: Vec<f64>,
    v: Matrix,
    v_w: Matrix,
    alpha: f64,
}

impl PcKeys {
    /// Assembles keys from stored parts, validating every invariant.
    pub fn new(u: Matrix, sigma: Vec<f64>, v: Matrix, v_w: Matrix, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let (m, n) = (u.rows(), v.rows());
        check_orthogonal("u", &u, m)?;
        check_orthogonal("v", &v, n)?;
        check_orthogonal("v_w", &v_w, n)?;
        check_singular_values("sigma", &sigma, m.min(n))?;
        Ok(Self {
            u,
            sigma,
            v,
            v_w,
            alpha,
        })
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn v_w(&self) -> &Matrix {
        &self.v_w
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }

    /// The cover image `U · diag(σ) · Vᵀ`, rebuilt from the stored factors.
    pub fn cover(&self) -> Matrix {
        let (m, n) = self.shape();
        let s = Matrix::diag_from(&self.sigma, m, n).expect("validated sigma length");
        self.u
            .mat_mul(&s)
            .and_then(|us| us.mat_mul(&self.v.transpose()))
            .expect("orthogonal factors keep entries finite")
    }
}

/// Principal components `U_w · S_w` of `mark` and its right singular vectors.
pub fn principal_components(mark: &Matrix) -> Result<(Matrix, Matrix)> {
    let (m, n) = mark.shape();
    let (u_w, s_w, v_w) = svd(mark)?.into_parts();
    let components = u_w.mat_mul(&Matrix::diag_from(&s_w, m, n)?)?;
    Ok((components, v_w))
}

/// Embeds the principal components of `mark` into the singular values of `cover`.
pub fn pc_embed(cover: &Matrix, mark: &Matrix, alpha: f64) -> Result<(Matrix, PcKeys)> {
    check_alpha(alpha)?;
    check_same_shape("pc_embed", cover, mark)?;
    let (m, n) = cover.shape();
    let (u, sigma, v) = svd(cover)?.into_parts();
    let (components, v_w) = principal_components(mark)?;
    let s1 = Matrix::diag_from(&sigma, m, n)?.add_scaled(alpha, &components)?;
    let watermarked = u.mat_mul(&s1)?.mat_mul(&v.transpose())?;
    let keys = PcKeys {
        u,
        sigma,
        v,
        v_w,
        alpha,
    };
    Ok((watermarked, keys))
}

/// `A_wa* = Uᵀ · (suspect − A) · V / α`. The inverses of the orthogonal
/// cover factors are their transposes.
pub fn recover_components(suspect: &Matrix, keys: &PcKeys) -> Result<Matrix> {
    if suspect.shape() != keys.shape() {
        return Err(Error::DimensionMismatch {
            op: "pc_extract",
            left: suspect.shape(),
            right: keys.shape(),
        });
    }
    let residual = suspect.sub(&keys.cover())?;
    keys.u
        .transpose()
        .mat_mul(&residual)?
        .mat_mul(&keys.v)?
        .scale(1.0 / keys.alpha)
}

/// Recovers the embedded mark `W* = A_wa* · V_wᵀ`.
pub fn pc_extract(suspect: &Matrix, keys: &PcKeys) -> Result<Matrix> {
    recover_components(suspect, keys)?.mat_mul(&keys.v_w.transpose())
}

/// Searches `suspect` for `reference` the way an attacker without `V_w`
/// would: recovers `A_wa*` and recombines it with the reference's own right
/// singular vectors, `P* = A_wa* · V_pᵀ`.
pub fn pc_reference_search(suspect: &Matrix, keys: &PcKeys, reference: &Matrix) -> Result<Matrix> {
    if reference.shape() != keys.shape() {
        return Err(Error::DimensionMismatch {
            op: "pc_reference_search",
            left: reference.shape(),
            right: keys.shape(),
        });
    }
    let components = recover_components(suspect, keys)?;
    let v_p = svd(reference)?.into_parts().2;
    components.mat_mul(&v_p.transpose())
}
