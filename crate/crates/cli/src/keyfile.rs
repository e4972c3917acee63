//! Binary key files.
//!
//! All integers and floats are little-endian:
//!
//! ```text
//! "SVWM"            4 bytes magic
//! version           u8, always 1
//! scheme            u8, 1 = liu-tan, 2 = pc
//! alpha             f64
//! rows, cols        u32, u32 (cover shape)
//! entry_count       u16
//! entry*            name_len u8, name (ASCII), kind u8 (1 = matrix, 2 = vector),
//!                   rows u32, cols u32, rows·cols f64 values row-major
//! ```
//!
//! Vectors are stored with `cols = 1`. Liu–Tan files hold `u_w`, `v_w`,
//! `s_cover` in that order; pc files hold `u`, `sigma`, `v`, `v_w`. The parser
//! accepts only that canonical layout, so `serialize(parse(bytes)) == bytes`
//! for every file it accepts.

use svdmark::{LiuTanKeys, Matrix, PcKeys};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"SVWM";
pub const VERSION: u8 = 1;
const SCHEME_LIU_TAN: u8 = 1;
const SCHEME_PC: u8 = 2;
const KIND_MATRIX: u8 = 1;
const KIND_VECTOR: u8 = 2;

const LIU_TAN_ENTRIES: [(&str, u8); 3] = [
    ("u_w", KIND_MATRIX),
    ("v_w", KIND_MATRIX),
    ("s_cover", KIND_VECTOR),
];
const PC_ENTRIES: [(&str, u8); 4] = [
    ("u", KIND_MATRIX),
    ("sigma", KIND_VECTOR),
    ("v", KIND_MATRIX),
    ("v_w", KIND_MATRIX),
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KeyFileError {
    #[error("not a key file: bad magic")]
    BadMagic,
    #[error("unsupported key file version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown scheme byte {0}")]
    UnknownScheme(u8),
    #[error("key file truncated at byte {0}")]
    Truncated(usize),
    #[error("{0} trailing bytes after the last entry")]
    TrailingBytes(usize),
    #[error("entry {index}: expected {expected}, found {found}")]
    UnexpectedEntry {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("entry {name}: stored as {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    EntryShape {
        name: String,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("invalid keys: {0}")]
    Invalid(#[from] svdmark::Error),
}

/// Keys for either scheme, as persisted on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum KeyFile {
    LiuTan(LiuTanKeys),
    Pc(PcKeys),
}

impl KeyFile {
    pub fn scheme_name(&self) -> &'static str {
        match self {
            KeyFile::LiuTan(_) => "liu-tan",
            KeyFile::Pc(_) => "pc",
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            KeyFile::LiuTan(k) => k.shape(),
            KeyFile::Pc(k) => k.shape(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let (scheme, alpha, entries): (u8, f64, Vec<(&str, Entry)>) = match self {
            KeyFile::LiuTan(k) => (
                SCHEME_LIU_TAN,
                k.alpha(),
                vec![
                    ("u_w", Entry::Matrix(k.u_w())),
                    ("v_w", Entry::Matrix(k.v_w())),
                    ("s_cover", Entry::Vector(k.s_cover())),
                ],
            ),
            KeyFile::Pc(k) => (
                SCHEME_PC,
                k.alpha(),
                vec![
                    ("u", Entry::Matrix(k.u())),
                    ("sigma", Entry::Vector(k.sigma())),
                    ("v", Entry::Matrix(k.v())),
                    ("v_w", Entry::Matrix(k.v_w())),
                ],
            ),
        };
        let (rows, cols) = self.shape();
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(scheme);
        out.extend_from_slice(&alpha.to_le_bytes());
        out.extend_from_slice(&(rows as u32).to_le_bytes());
        out.extend_from_slice(&(cols as u32).to_le_bytes());
        out.extend_from_slice(&(entries.len() as u16).to_le_bytes());
        for (name, entry) in entries {
            out.push(name.len() as u8);
            out.extend_from_slice(name.as_bytes());
            let (kind, r, c, values) = match entry {
                Entry::Matrix(m) => (KIND_MATRIX, m.rows(), m.cols(), m.as_slice()),
                Entry::Vector(v) => (KIND_VECTOR, v.len(), 1, v),
            };
            out.push(kind);
            out.extend_from_slice(&(r as u32).to_le_bytes());
            out.extend_from_slice(&(c as u32).to_le_bytes());
            for x in values {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, KeyFileError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(KeyFileError::BadMagic);
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(KeyFileError::UnsupportedVersion(version));
        }
        let scheme = r.u8()?;
        let layout: &[(&str, u8)] = match scheme {
            SCHEME_LIU_TAN => &LIU_TAN_ENTRIES,
            SCHEME_PC => &PC_ENTRIES,
            other => return Err(KeyFileError::UnknownScheme(other)),
        };
        let alpha = r.f64()?;
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let count = r.u16()? as usize;
        if count != layout.len() {
            return Err(KeyFileError::UnexpectedEntry {
                index: count.min(layout.len()),
                expected: format!("{} entries", layout.len()),
                found: format!("{count} entries"),
            });
        }

        let mut values = Vec::with_capacity(layout.len());
        for (index, &(want_name, want_kind)) in layout.iter().enumerate() {
            let name_len = r.u8()? as usize;
            let name = r.take(name_len)?;
            if name != want_name.as_bytes() {
                return Err(KeyFileError::UnexpectedEntry {
                    index,
                    expected: want_name.to_string(),
                    found: String::from_utf8_lossy(name).into_owned(),
                });
            }
            let kind = r.u8()?;
            if kind != want_kind {
                return Err(KeyFileError::UnexpectedEntry {
                    index,
                    expected: format!("{want_name} of kind {want_kind}"),
                    found: format!("kind {kind}"),
                });
            }
            let er = r.u32()? as usize;
            let ec = r.u32()? as usize;
            let (xr, xc) = expected_shape(want_name, rows, cols);
            if (er, ec) != (xr, xc) {
                return Err(KeyFileError::EntryShape {
                    name: want_name.to_string(),
                    rows: er,
                    cols: ec,
                    expected_rows: xr,
                    expected_cols: xc,
                });
            }
            let len = er
                .checked_mul(ec)
                .and_then(|n| n.checked_mul(8))
                .ok_or(KeyFileError::Truncated(bytes.len()))?;
            let payload = r.take(len)?;
            let data: Vec<f64> = payload
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
            values.push(data);
        }
        if r.pos != bytes.len() {
            return Err(KeyFileError::TrailingBytes(bytes.len() - r.pos));
        }

        let mut values = values.into_iter();
        let mut next = || values.next().expect("one value set per layout entry");
        let square = |data: Vec<f64>, dim: usize| Matrix::new(dim, dim, data);
        Ok(match scheme {
            SCHEME_LIU_TAN => {
                let u_w = square(next(), rows)?;
                let v_w = square(next(), cols)?;
                let s_cover = next();
                KeyFile::LiuTan(LiuTanKeys::new(u_w, v_w, s_cover, alpha)?)
            }
            _ => {
                let u = square(next(), rows)?;
                let sigma = next();
                let v = square(next(), cols)?;
                let v_w = square(next(), cols)?;
                KeyFile::Pc(PcKeys::new(u, sigma, v, v_w, alpha)?)
            }
        })
    }
}

enum Entry<'a> {
    Matrix(&'a Matrix),
    Vector(&'a [f64]),
}

fn expected_shape(name: &str, rows: usize, cols: usize) -> (usize, usize) {
    match name {
        "u_w" | "u" => (rows, rows),
        "v_w" | "v" => (cols, cols),
        _ => (rows.min(cols), 1),
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], KeyFileError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or(KeyFileError::Truncated(self.bytes.len()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, KeyFileError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, KeyFileError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, KeyFileError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, KeyFileError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use svdmark::{liu_tan, pc};

    fn images() -> (Matrix, Matrix) {
        let cover = Matrix::from_fn(5, 4, |i, j| 50.0 + 30.0 * ((i * 3 + j) as f64).sin());
        let mark = Matrix::from_fn(5, 4, |i, j| 128.0 + 60.0 * ((i + 2 * j) as f64).cos());
        (cover, mark)
    }

    #[test]
    fn liu_tan_layout() {
        let (cover, mark) = images();
        let (_, keys) = liu_tan::lt_embed(&cover, &mark, 0.05).unwrap();
        let bytes = KeyFile::LiuTan(keys.clone()).to_bytes();
        assert_eq!(&bytes[..4], b"SVWM");
        assert_eq!(bytes[4], 1);
        assert_eq!(bytes[5], 1);
        assert_eq!(f64::from_le_bytes(bytes[6..14].try_into().unwrap()), 0.05);
        assert_eq!(&bytes[14..18], &5u32.to_le_bytes());
        assert_eq!(&bytes[18..22], &4u32.to_le_bytes());
        assert_eq!(&bytes[22..24], &3u16.to_le_bytes());
        assert_eq!(bytes[24], 3);
        assert_eq!(&bytes[25..28], b"u_w");
        // u_w 5x5, v_w 4x4, s_cover 4x1 plus entry headers.
        let expected_len = 24 + (1 + 3 + 9 + 25 * 8) + (1 + 3 + 9 + 16 * 8) + (1 + 7 + 9 + 4 * 8);
        assert_eq!(bytes.len(), expected_len);

        let parsed = KeyFile::from_bytes(&bytes).unwrap();
        assert_eq!(parsed, KeyFile::LiuTan(keys));
        assert_eq!(parsed.to_bytes(), bytes);
    }

    #[test]
    fn pc_layout() {
        let (cover, mark) = images();
        let (_, keys) = pc::pc_embed(&cover, &mark, 0.1).unwrap();
        let bytes = KeyFile::Pc(keys.clone()).to_bytes();
        assert_eq!(bytes[5], 2);
        assert_eq!(&bytes[22..24], &4u16.to_le_bytes());
        let parsed = KeyFile::from_bytes(&bytes).unwrap();
        assert_eq!(parsed.scheme_name(), "pc");
        assert_eq!(parsed, KeyFile::Pc(keys));
        assert_eq!(parsed.to_bytes(), bytes);
    }

    fn sample() -> Vec<u8> {
        let (cover, mark) = images();
        let (_, keys) = pc::pc_embed(&cover, &mark, 0.1).unwrap();
        KeyFile::Pc(keys).to_bytes()
    }

    #[test]
    fn header_corruption() {
        let mut b = sample();
        b[0] = b'X';
        assert_eq!(KeyFile::from_bytes(&b), Err(KeyFileError::BadMagic));

        let mut b = sample();
        b[4] = 2;
        assert_eq!(KeyFile::from_bytes(&b), Err(KeyFileError::UnsupportedVersion(2)));

        let mut b = sample();
        b[5] = 7;
        assert_eq!(KeyFile::from_bytes(&b), Err(KeyFileError::UnknownScheme(7)));

        // A pc payload relabelled as liu-tan no longer matches the entry layout.
        let mut b = sample();
        b[5] = 1;
        assert!(matches!(
            KeyFile::from_bytes(&b),
            Err(KeyFileError::UnexpectedEntry { .. })
        ));
    }

    #[test]
    fn truncation_and_trailing_bytes() {
        let b = sample();
        for cut in [0, 3, 10, 24, 30, b.len() - 1] {
            assert!(
                matches!(KeyFile::from_bytes(&b[..cut]), Err(KeyFileError::Truncated(_)) | Err(KeyFileError::BadMagic)),
                "cut at {cut}"
            );
        }
        let mut long = b.clone();
        long.push(0);
        assert_eq!(KeyFile::from_bytes(&long), Err(KeyFileError::TrailingBytes(1)));
    }

    #[test]
    fn invalid_contents() {
        // Zero alpha.
        let mut b = sample();
        b[6..14].copy_from_slice(&0f64.to_le_bytes());
        assert!(matches!(KeyFile::from_bytes(&b), Err(KeyFileError::Invalid(_))));

        // NaN inside u.
        let mut b = sample();
        let first_value = 24 + 1 + 1 + 1 + 8;
        b[first_value..first_value + 8].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(matches!(KeyFile::from_bytes(&b), Err(KeyFileError::Invalid(_))));

        // Scaled u is no longer orthogonal.
        let mut b = sample();
        b[first_value..first_value + 8].copy_from_slice(&7.0f64.to_le_bytes());
        assert!(matches!(KeyFile::from_bytes(&b), Err(KeyFileError::Invalid(_))));

        // Header shape disagrees with the entries.
        let mut b = sample();
        b[14..18].copy_from_slice(&6u32.to_le_bytes());
        assert!(matches!(KeyFile::from_bytes(&b), Err(KeyFileError::EntryShape { .. })));
    }
}
