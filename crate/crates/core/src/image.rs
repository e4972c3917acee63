//! 8-bit grayscale rasters and the binary PGM (`P5`) format.

use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("unsupported magic at byte {offset}: expected P5")]
    UnsupportedMagic { offset: usize },
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: &'static str },
    #[error("zero dimension at byte {offset}")]
    ZeroDimension { offset: usize },
    #[error("unsupported maxval {maxval} at byte {offset}: must be 1..=255")]
    UnsupportedMaxval { offset: usize, maxval: u32 },
    #[error("truncated pixel data at byte {offset}: expected {expected} bytes, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("pixel count {found} does not match {width}x{height}")]
    PixelCount {
        width: usize,
        height: usize,
        found: usize,
    },
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, PgmError> {
        if width == 0 || height == 0 {
            return Err(PgmError::ZeroDimension { offset: 0 });
        }
        if pixels.len() != width * height {
            return Err(PgmError::PixelCount {
                width,
                height,
                found: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major intensities.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Intensities as a `height × width` matrix with entries in `[0, 255]`.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::new(
            self.height,
            self.width,
            self.pixels.iter().map(|&p| f64::from(p)).collect(),
        )
        .expect("positive dimensions and finite entries")
    }

    /// Clamps every entry to `[0, 255]` and rounds half away from zero.
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            width: m.cols(),
            height: m.rows(),
            pixels: m.as_slice().iter().map(|&x| quantize_pixel(x)).collect(),
        }
    }
}

/// Clamp to `[0, 255]`, then round half away from zero.
pub fn quantize_pixel(x: f64) -> u8 {
    x.clamp(0.0, 255.0).round() as u8
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<(usize, u32), PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(b - b'0')))
                .ok_or(PgmError::MalformedHeader {
                    offset: start,
                    reason: "number too large",
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PgmError::MalformedHeader {
                offset: start,
                reason: what,
            });
        }
        Ok((start, value))
    }
}

/// Parses a binary PGM file.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(PgmError::UnsupportedMagic { offset: 0 });
    }
    let mut cur = Cursor { bytes, pos: 2 };
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(PgmError::UnsupportedMagic { offset: 0 }),
    }

    let (w_at, width) = cur.number("expected width")?;
    let (h_at, height) = cur.number("expected height")?;
    if width == 0 {
        return Err(PgmError::ZeroDimension { offset: w_at });
    }
    if height == 0 {
        return Err(PgmError::ZeroDimension { offset: h_at });
    }
    let (m_at, maxval) = cur.number("expected maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::UnsupportedMaxval {
            offset: m_at,
            maxval,
        });
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(PgmError::MalformedHeader {
                offset: cur.pos,
                reason: "expected whitespace after maxval",
            })
        }
    }

    let (width, height) = (width as usize, height as usize);
    let expected = width * height;
    let raster = &bytes[cur.pos..];
    if raster.len() < expected {
        return Err(PgmError::Truncated {
            offset: cur.pos,
            expected,
            found: raster.len(),
        });
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

/// Serializes as `P5\n{width} {height}\n255\n` followed by the raw raster.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

pub fn image_to_matrix(img: &GrayImage) -> Matrix {
    img.to_matrix()
}

pub fn matrix_to_image(m: &Matrix) -> GrayImage {
    GrayImage::from_matrix(m)
}
