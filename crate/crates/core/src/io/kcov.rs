use std::path::Path;

use super::binary::{put_matrix, put_u16, put_u32, read_all, version, write_atomic, Reader};
use crate::error::{Error, Result};
use crate::estimation::KronCovModel;
use crate::linalg::HermitianMatrix;

pub const KCOV_MAGIC: &[u8; 4] = b"KCOV";
pub const KCOV_VERSION: u16 = 1;

pub fn encode_model(model: &KronCovModel<f64>) -> Result<Vec<u8>> {
    let (p, q) = (model.p(), model.q());
    let mut out = Vec::with_capacity(22 + 16 * (p * p + q * q));
    out.extend_from_slice(KCOV_MAGIC);
    put_u16(&mut out, KCOV_VERSION);
    put_u32(&mut out, "p", p)?;
    put_u32(&mut out, "q", q)?;
    put_u32(&mut out, "r_a", model.r_a())?;
    put_u32(&mut out, "r_b", model.r_b())?;
    put_matrix(&mut out, model.a_factor().as_matrix());
    put_matrix(&mut out, model.b_factor().as_matrix());
    Ok(out)
}

/// The decoded model carries factors and ranks only; fit diagnostics are not persisted.
pub fn decode_model(bytes: &[u8]) -> Result<KronCovModel<f64>> {
    let mut r = Reader::new(bytes);
    r.magic(KCOV_MAGIC)?;
    version(&mut r, KCOV_VERSION)?;
    let p = r.u32("p")?;
    let q = r.u32("q")?;
    let r_a = r.u32("r_a")?;
    let r_b = r.u32("r_b")?;
    for (field, v, max) in [("p", p, usize::MAX), ("q", q, usize::MAX), ("r_a", r_a, p), ("r_b", r_b, q)] {
        if v == 0 || v > max {
            return Err(Error::Format {
                field,
                message: format!("value {v} out of range"),
            });
        }
    }
    let a = r.matrix("a_factor", p, p)?;
    let b = r.matrix("b_factor", q, q)?;
    r.finish("b_factor")?;
    let wrap = |field: &'static str, m| {
        HermitianMatrix::new(m, true).map_err(|e| Error::Format {
            field,
            message: e.to_string(),
        })
    };
    KronCovModel::from_factors(wrap("a_factor", a)?, wrap("b_factor", b)?, r_a, r_b)
}

pub fn write_model(path: &Path, model: &KronCovModel<f64>) -> Result<()> {
    write_atomic(path, &encode_model(model)?)
}

pub fn read_model(path: &Path) -> Result<KronCovModel<f64>> {
    decode_model(&read_all(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::{lr_kron, sample_covariance, LrKronOptions, SampleSet};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn model() -> KronCovModel<f64> {
        let x = DMatrix::from_fn(8, 12, |i, j| Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64));
        let s = sample_covariance(&SampleSet::from_matrix(2, 4, x).unwrap());
        lr_kron(&s, 2, 4, 1, 2, &LrKronOptions::default()).unwrap()
    }

    #[test]
    fn round_trip_bit_exact() {
        let m = model();
        let bytes = encode_model(&m).unwrap();
        assert_eq!(bytes.len(), 22 + 16 * (4 + 16));
        let back = decode_model(&bytes).unwrap();
        assert_eq!((back.r_a(), back.r_b()), (1, 2));
        assert!(back.objective_trace.is_empty());
        for (x, y) in [(m.a_factor(), back.a_factor()), (m.b_factor(), back.b_factor())] {
            for (u, v) in x.as_matrix().iter().zip(y.as_matrix().iter()) {
                assert_eq!((u.re.to_bits(), u.im.to_bits()), (v.re.to_bits(), v.im.to_bits()));
            }
        }
        assert_eq!(encode_model(&back).unwrap(), bytes);
    }

    #[test]
    fn rejects_bad_fields() {
        let good = encode_model(&model()).unwrap();
        let mut bad = good.clone();
        bad[18..22].copy_from_slice(&9u32.to_le_bytes());
        assert!(matches!(decode_model(&bad), Err(Error::Format { field: "r_b", .. })));
        assert!(matches!(decode_model(&good[..good.len() - 8]), Err(Error::Format { field: "b_factor", .. })));
        assert!(matches!(decode_model(b"KPHD\x01\x00"), Err(Error::Format { field: "magic", .. })));
    }
}
