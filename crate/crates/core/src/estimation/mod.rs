//! Sample covariance, the closed-form Kronecker fit and the LR-Kron estimator.

mod fit;
mod lrkron;
mod samples;

pub use fit::{contract_for_a, contract_for_b, kron_fit_unconstrained};
pub use lrkron::{lr_kron, KronCovModel, LrKronOptions, RANK_TOL};
pub use samples::{sample_covariance, SampleSet};
