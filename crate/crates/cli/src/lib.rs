//! Library half of the `svdmark` command-line tool.
//!
//! [`run`] executes a parsed [`Cli`] and writes `key=value` result lines to
//! `out` and diagnostics to `err`, so the whole command surface can be driven
//! in-process. The binary only maps the returned [`CliError`] to its exit code.

pub mod keyfile;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use svdmark::analysis::{self, PEAK_8BIT};
use svdmark::image::{matrix_to_image, read_pgm, write_pgm};
use svdmark::{liu_tan, pc, Matrix};
use thiserror::Error;

pub use keyfile::{KeyFile, KeyFileError};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Extraction output whose Frobenius norm is below this fraction of the
/// reference's is reported as "nothing embedded".
const EMPTY_EXTRACTION: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "svdmark", version, about = "SVD-domain image watermarking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Singular-value embedding; vulnerable to forged keys.
    Liutan,
    /// Principal-components embedding.
    Pc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistortionKind {
    Gaussian,
    Crop,
    Quantize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a mark into a cover image and write the detector key file.
    Embed {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        cover: PathBuf,
        mark: PathBuf,
        out_image: PathBuf,
        out_key: PathBuf,
    },
    /// Extract a mark from a suspect image with the scheme recorded in a key file.
    Extract {
        suspect: PathBuf,
        key: PathBuf,
        out_mark: PathBuf,
        /// Report the correlation of the raw extraction with this image.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Build Liu-Tan keys for a reference mark that was never embedded.
    Forge {
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        cover: PathBuf,
        reference: PathBuf,
        out_key: PathBuf,
    },
    /// Search a pc-watermarked image for a reference mark using its own singular vectors.
    Search {
        suspect: PathBuf,
        key: PathBuf,
        reference: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a distortion to an image.
    Distort {
        #[arg(value_enum)]
        kind: DistortionKind,
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Noise standard deviation in pixel units (gaussian).
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, default_value_t = 0)]
        top: usize,
        #[arg(long, default_value_t = 0)]
        left: usize,
        /// Crop rectangle height; defaults to the rest of the image.
        #[arg(long)]
        height: Option<usize>,
        /// Crop rectangle width; defaults to the rest of the image.
        #[arg(long)]
        width: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        fill: f64,
    },
    /// Print ncc, psnr and mse between two images.
    Metrics { first: PathBuf, second: PathBuf },
}

/// Failures, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Pgm {
        path: PathBuf,
        source: svdmark::PgmError,
    },
    #[error("{0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(svdmark::Error),
    #[error("{path}: {source}")]
    KeyFile {
        path: PathBuf,
        source: KeyFileError,
    },
    #[error("search requires pc keys, {path} holds {scheme} keys")]
    WrongScheme { path: PathBuf, scheme: &'static str },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Pgm { .. } => 2,
            CliError::Precondition(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::KeyFile { .. } | CliError::WrongScheme { .. } => 5,
        }
    }
}

impl From<svdmark::Error> for CliError {
    fn from(e: svdmark::Error) -> Self {
        use svdmark::Error as E;
        match e {
            E::NonFinite(_) | E::NoConvergence { .. } | E::UndefinedCorrelation => {
                CliError::Numerical(e)
            }
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn read_matrix(path: &Path) -> Result<Matrix, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let img = read_pgm(&bytes).map_err(|source| CliError::Pgm {
        path: path.to_owned(),
        source,
    })?;
    Ok(img.to_matrix())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_matrix(path: &Path, m: &Matrix) -> Result<(), CliError> {
    write_file(path, &write_pgm(&matrix_to_image(m)))
}

fn read_keys(path: &Path) -> Result<KeyFile, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    KeyFile::from_bytes(&bytes).map_err(|source| CliError::KeyFile {
        path: path.to_owned(),
        source,
    })
}

fn same_shape(what: &str, a: &Matrix, b: &Matrix) -> Result<(), CliError> {
    if a.shape() != b.shape() {
        return Err(CliError::Precondition(format!(
            "{what}: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Affine min–max stretch to `[0, 255]`. A constant matrix maps to 128 and
/// the second value is `true`.
pub fn normalize_for_display(m: &Matrix) -> (Matrix, bool) {
    let lo = m.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = m.as_slice().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return (m.map(|_| 128.0), true);
    }
    let span = hi - lo;
    (m.map(|x| 255.0 * ((x - lo) / span)), false)
}

/// Formats a float so that infinities and NaN stay parseable as `inf` / `nan`.
fn fmt_value(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x}")
    }
}

fn ncc_or_nan(x: &Matrix, y: &Matrix, err: &mut dyn Write) -> Result<f64, CliError> {
    match analysis::ncc(x, y) {
        Ok(v) => Ok(v),
        Err(svdmark::Error::UndefinedCorrelation) => {
            diag(err, "warning: correlation undefined for a constant image");
            Ok(f64::NAN)
        }
        Err(e) => Err(e.into()),
    }
}

fn diag(err: &mut dyn Write, msg: &str) {
    // Diagnostics are best effort; a closed stderr must not fail the command.
    let _ = writeln!(err, "{msg}");
}

fn emit(out: &mut dyn Write, line: String) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn write_normalized(path: &Path, m: &Matrix, err: &mut dyn Write) -> Result<(), CliError> {
    let (display, degenerate) = normalize_for_display(m);
    if degenerate {
        diag(
            err,
            "warning: extracted matrix is constant; writing mid-gray image",
        );
    }
    write_matrix(path, &display)
}

/// Executes one command.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Embed {
            scheme,
            alpha,
            cover,
            mark,
            out_image,
            out_key,
        } => {
            let cover = read_matrix(&cover)?;
            let mark = read_matrix(&mark)?;
            same_shape("mark must match cover", &cover, &mark)?;
            let (marked, keys) = match scheme {
                Scheme::Liutan => {
                    let (m, k) = liu_tan::lt_embed(&cover, &mark, alpha)?;
                    (m, KeyFile::LiuTan(k))
                }
                Scheme::Pc => {
                    let (m, k) = pc::pc_embed(&cover, &mark, alpha)?;
                    (m, KeyFile::Pc(k))
                }
            };
            let image = matrix_to_image(&marked);
            write_file(&out_image, &write_pgm(&image))?;
            write_file(&out_key, &keys.to_bytes())?;
            let psnr = analysis::psnr(&cover, &image.to_matrix(), PEAK_8BIT)?;
            emit(out, format!("psnr_db={}", fmt_value(psnr)))
        }

        Command::Extract {
            suspect,
            key,
            out_mark,
            reference,
        } => {
            let suspect = read_matrix(&suspect)?;
            let keys = read_keys(&key)?;
            let reference = reference.as_deref().map(read_matrix).transpose()?;
            let extracted = match &keys {
                KeyFile::LiuTan(k) => liu_tan::lt_extract(&suspect, k)?,
                KeyFile::Pc(k) => pc::pc_extract(&suspect, k)?,
            };
            write_normalized(&out_mark, &extracted, err)?;
            match reference {
                None => emit(out, "ncc_self_check=skipped".into()),
                Some(r) => {
                    same_shape("reference must match suspect", &suspect, &r)?;
                    let v = ncc_or_nan(&r, &extracted, err)?;
                    emit(out, format!("ncc={}", fmt_value(v)))
                }
            }
        }

        Command::Forge {
            alpha,
            cover,
            reference,
            out_key,
        } => {
            let cover = read_matrix(&cover)?;
            let reference = read_matrix(&reference)?;
            same_shape("reference must match cover", &cover, &reference)?;
            let (keys, _) = liu_tan::lt_keygen(&cover, &reference, alpha)?;
            write_file(&out_key, &KeyFile::LiuTan(keys).to_bytes())
        }

        Command::Search {
            suspect,
            key,
            reference,
            out: out_path,
        } => {
            let keys = match read_keys(&key)? {
                KeyFile::Pc(k) => k,
                other => {
                    return Err(CliError::WrongScheme {
                        path: key,
                        scheme: other.scheme_name(),
                    })
                }
            };
            let suspect = read_matrix(&suspect)?;
            let reference = read_matrix(&reference)?;
            let found = pc::pc_reference_search(&suspect, &keys, &reference)?;
            if found.frobenius_norm() <= EMPTY_EXTRACTION * reference.frobenius_norm() {
                diag(
                    err,
                    "warning: suspect carries no embedded components; search output is empty",
                );
            }
            if let Some(path) = out_path {
                write_normalized(&path, &found, err)?;
            }
            let v = ncc_or_nan(&reference, &found, err)?;
            emit(out, format!("ncc={}", fmt_value(v)))
        }

        Command::Distort {
            kind,
            input,
            output,
            seed,
            sigma,
            top,
            left,
            height,
            width,
            fill,
        } => {
            let m = read_matrix(&input)?;
            let distorted = match kind {
                DistortionKind::Gaussian => {
                    let sigma = sigma.ok_or_else(|| {
                        CliError::Precondition("gaussian distortion needs --sigma".into())
                    })?;
                    analysis::distort_gaussian(&m, sigma, seed)?
                }
                DistortionKind::Crop => {
                    let height = height.unwrap_or(m.rows().saturating_sub(top));
                    let width = width.unwrap_or(m.cols().saturating_sub(left));
                    analysis::distort_crop(&m, top, left, height, width, fill)?
                }
                DistortionKind::Quantize => analysis::distort_quantize(&m),
            };
            write_matrix(&output, &distorted)
        }

        Command::Metrics { first, second } => {
            let a = read_matrix(&first)?;
            let b = read_matrix(&second)?;
            same_shape("images must have the same size", &a, &b)?;
            let ncc = ncc_or_nan(&a, &b, err)?;
            let psnr = analysis::psnr(&a, &b, PEAK_8BIT)?;
            let mse = analysis::mse(&a, &b)?;
            emit(out, format!("ncc={}", fmt_value(ncc)))?;
            emit(out, format!("psnr_db={}", fmt_value(psnr)))?;
            emit(out, format!("mse={}", fmt_value(mse)))
        }
    }
}
