use std::path::Path;

use super::binary::{put_matrix, put_u16, put_u32, read_all, read_prefix, version, write_atomic, Reader};
use crate::error::{Error, Result};
use crate::estimation::SampleSet;

pub const PHD_MAGIC: &[u8; 4] = b"KPHD";
pub const PHD_VERSION: u16 = 1;
/// Magic, version (u16), p, q, n (u32).
pub const PHD_HEADER_LEN: usize = 4 + 2 + 3 * 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhdHeader {
    pub p: usize,
    pub q: usize,
    pub n: usize,
}

impl PhdHeader {
    pub fn payload_len(&self) -> usize {
        self.n * self.p * self.q * 16
    }
}

fn parse_header(r: &mut Reader<'_>) -> Result<PhdHeader> {
    r.magic(PHD_MAGIC)?;
    version(r, PHD_VERSION)?;
    let h = PhdHeader {
        p: r.u32("p")?,
        q: r.u32("q")?,
        n: r.u32("n")?,
    };
    for (field, v) in [("p", h.p), ("q", h.q), ("n", h.n)] {
        if v == 0 {
            return Err(Error::Format {
                field,
                message: "must be positive".into(),
            });
        }
    }
    Ok(h)
}

pub fn encode_phase_history(data: &SampleSet<f64>) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(PHD_HEADER_LEN + data.len() * data.p() * data.q() * 16);
    out.extend_from_slice(PHD_MAGIC);
    put_u16(&mut out, PHD_VERSION);
    put_u32(&mut out, "p", data.p())?;
    put_u32(&mut out, "q", data.q())?;
    put_u32(&mut out, "n", data.len())?;
    put_matrix(&mut out, data.as_matrix());
    Ok(out)
}

pub fn decode_phase_history(bytes: &[u8]) -> Result<SampleSet<f64>> {
    let mut r = Reader::new(bytes);
    let h = parse_header(&mut r)?;
    if r.remaining() != h.payload_len() {
        return Err(Error::Format {
            field: "n",
            message: format!(
                "declares {} records ({} payload bytes) but file carries {} payload bytes",
                h.n,
                h.payload_len(),
                r.remaining()
            ),
        });
    }
    let m = r.matrix("payload", h.p * h.q, h.n)?;
    r.finish("payload")?;
    SampleSet::from_matrix(h.p, h.q, m)
}

pub fn write_phase_history(path: &Path, data: &SampleSet<f64>) -> Result<()> {
    write_atomic(path, &encode_phase_history(data)?)
}

pub fn read_phase_history(path: &Path) -> Result<SampleSet<f64>> {
    decode_phase_history(&read_all(path)?)
}

/// Header only; the payload is not read.
pub fn read_phase_history_header(path: &Path) -> Result<PhdHeader> {
    parse_header(&mut Reader::new(&read_prefix(path, PHD_HEADER_LEN)?))
}
