//! SVD-domain image watermarking.
//!
//! Two schemes share one numeric core:
//!
//! * [`liu_tan`] adds the mark to the cover's singular values and keeps the
//!   singular vectors of the sum as detector keys. It is vulnerable to the
//!   ambiguity attack: keys forged for any reference mark "detect" that mark
//!   in any image.
//! * [`pc`] embeds the mark's principal components `U_w S_w` and withholds
//!   `V_w`, so a reference search with the wrong mark yields noise.
//!
//! [`svd`] provides the canonical decomposition both schemes rely on,
//! [`analysis`] the correlation/PSNR metrics and distortions, and [`image`]
//! binary PGM input and output.
//!
//! ```
//! use svdmark::{pc, synth, analysis};
//!
//! let cover = synth::smooth_field(32, 32, 1);
//! let mark = synth::smooth_field(32, 32, 2);
//! let (marked, keys) = pc::pc_embed(&cover, &mark, 0.05)?;
//! let recovered = pc::pc_extract(&marked, &keys)?;
//! assert!(analysis::ncc(&mark, &recovered)? > 0.9999);
//! # Ok::<(), svdmark::Error>(())
//! ```

pub mod analysis;
mod error;
pub mod image;
pub mod liu_tan;
pub mod matrix;
pub mod pc;
pub mod svd;
pub mod synth;

pub use error::{Error, Result};
pub use image::{GrayImage, PgmError};
pub use liu_tan::LiuTanKeys;
pub use matrix::Matrix;
pub use pc::PcKeys;
pub use svd::SvdTriple;

/// The guide in `book/`, compiled here so its examples run as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/svd.md")]
    pub mod svd {}
    #[doc = include_str!("../../../book/src/liu_tan.md")]
    pub mod liu_tan {}
    #[doc = include_str!("../../../book/src/pc.md")]
    pub mod pc {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    pub mod analysis {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
