//! Low-rank Kronecker clutter covariance estimation and Kronecker STAP filters.

pub mod error;
pub mod estimation;
pub mod experiment;
pub mod filters;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod sim;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type HermitianMatrix64 = linalg::HermitianMatrix<f64>;
pub type HermitianMatrix32 = linalg::HermitianMatrix<f32>;
pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
pub type SampleSet64 = estimation::SampleSet<f64>;
pub type SampleSet32 = estimation::SampleSet<f32>;
pub type KronCovModel64 = estimation::KronCovModel<f64>;
pub type KronCovModel32 = estimation::KronCovModel<f32>;
pub type StapFilter64 = filters::StapFilter<f64>;
pub type StapFilter32 = filters::StapFilter<f32>;
