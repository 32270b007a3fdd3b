use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) fn put_u16(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn put_u32(out: &mut Vec<u8>, field: &'static str, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::Format {
        field,
        message: format!("{v} does not fit in u32"),
    })?;
    out.extend_from_slice(&v.to_le_bytes());
    Ok(())
}

/// Column-major `(re, im)` pairs.
pub(crate) fn put_matrix(out: &mut Vec<u8>, m: &DMatrix<Complex64>) {
    for z in m.iter() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
}

/// Cursor over a byte slice that reports which field ran short.
pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    fn take(&mut self, field: &'static str, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.buf.len());
        let Some(end) = end else {
            return Err(Error::Format {
                field,
                message: format!("truncated: need {len} bytes at offset {}, file has {}", self.pos, self.buf.len()),
            });
        };
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub(crate) fn magic(&mut self, want: &[u8; 4]) -> Result<()> {
        let got = self.take("magic", 4)?;
        if got != want {
            return Err(Error::Format {
                field: "magic",
                message: format!("expected {:?}, found {:?}", String::from_utf8_lossy(want), String::from_utf8_lossy(got)),
            });
        }
        Ok(())
    }

    pub(crate) fn u16(&mut self, field: &'static str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(field, 2)?.try_into().expect("2 bytes")))
    }

    pub(crate) fn u32(&mut self, field: &'static str) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(field, 4)?.try_into().expect("4 bytes")) as usize)
    }

    pub(crate) fn matrix(&mut self, field: &'static str, rows: usize, cols: usize) -> Result<DMatrix<Complex64>> {
        let count = rows.checked_mul(cols).and_then(|c| c.checked_mul(16)).ok_or(Error::Format {
            field,
            message: "declared size overflows".into(),
        })?;
        let bytes = self.take(field, count)?;
        let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
        let vals = bytes.chunks_exact(16).map(|c| Complex64::new(f(&c[..8]), f(&c[8..])));
        Ok(DMatrix::from_iterator(rows, cols, vals))
    }

    pub(crate) fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub(crate) fn finish(&self, field: &'static str) -> Result<()> {
        match self.remaining() {
            0 => Ok(()),
            extra => Err(Error::Format {
                field,
                message: format!("{extra} trailing bytes after declared payload"),
            }),
        }
    }
}

pub(crate) fn version(r: &mut Reader<'_>, want: u16) -> Result<()> {
    let v = r.u16("version")?;
    if v != want {
        return Err(Error::Format {
            field: "version",
            message: format!("unsupported version {v} (expected {want})"),
        });
    }
    Ok(())
}

pub(crate) fn read_prefix(path: &std::path::Path, len: usize) -> Result<Vec<u8>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut buf = Vec::with_capacity(len);
    f.take(len as u64).read_to_end(&mut buf).map_err(|e| Error::io(path, e))?;
    Ok(buf)
}

pub(crate) fn read_all(path: &std::path::Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

/// Writes through a sibling temporary file and renames it into place, so a failed write leaves no partial output.
pub fn write_atomic(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => std::path::Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
