//! Binary phase-history (KPHD) and covariance-model (KCOV) files. All numerics are little-endian f64.

mod binary;
mod kcov;
mod phd;

pub use binary::write_atomic;
pub use kcov::{decode_model, encode_model, read_model, write_model, KCOV_MAGIC, KCOV_VERSION};
pub use phd::{
    decode_phase_history, encode_phase_history, read_phase_history, read_phase_history_header, write_phase_history,
    PhdHeader, PHD_HEADER_LEN, PHD_MAGIC, PHD_VERSION,
};
