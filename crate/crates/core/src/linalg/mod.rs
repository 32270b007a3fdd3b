//! Dense complex kernels: Hermitian eigen-decomposition, truncation, Kronecker
//! products and the rearrangement operator.

mod eig;
mod kron;
mod matrix;

pub use eig::{eig_truncate, hermitian_eig, EigenPairs};
pub(crate) use eig::{eig_dense, psd_truncate};
pub use kron::{block, kron, rearrange, rearrange_inv, KRON_MAX_ENTRIES};
pub use matrix::{symmetrize, CVector, ComplexMatrix, HermitianMatrix, HERMITIAN_TOL, PSD_TOL};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::scalar::Real;

/// `‖UU^H − VV^H‖_F` for orthonormal column sets.
pub fn projector_distance<T: Real>(u: &DMatrix<Complex<T>>, v: &DMatrix<Complex<T>>) -> T {
    (u * u.adjoint() - v * v.adjoint()).norm()
}
