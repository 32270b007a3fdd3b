use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{CVector, HermitianMatrix};
use crate::scalar::{creal, Real};

/// Training or test range bins, each a length `p·q` antenna-major vector.
///
/// Stored as the `pq × n` matrix whose columns are the samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet<T: Real> {
    p: usize,
    q: usize,
    data: DMatrix<Complex<T>>,
}

impl<T: Real> SampleSet<T> {
    pub fn new(p: usize, q: usize, samples: &[CVector<T>]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::arg("sample set must contain at least one sample"));
        }
        if let Some((i, s)) = samples.iter().enumerate().find(|(_, s)| s.len() != p * q) {
            return Err(Error::arg(format!("sample {i} has length {}, expected {}", s.len(), p * q)));
        }
        Self::from_matrix(p, q, DMatrix::from_columns(samples))
    }

    /// Wraps a `pq × n` matrix of samples (one per column).
    pub fn from_matrix(p: usize, q: usize, data: DMatrix<Complex<T>>) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::arg("p and q must be positive"));
        }
        if data.nrows() != p * q {
            return Err(Error::arg(format!("samples have length {}, expected {}", data.nrows(), p * q)));
        }
        if data.ncols() == 0 {
            return Err(Error::arg("sample set must contain at least one sample"));
        }
        Ok(Self { p, q, data })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.data.ncols() == 0
    }

    pub fn sample(&self, i: usize) -> CVector<T> {
        self.data.column(i).into_owned()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn as_matrix_mut(&mut self) -> &mut DMatrix<Complex<T>> {
        &mut self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.data
    }
}

/// `(1/n)·Σ x_m x_m^H`, flagged psd.
pub fn sample_covariance<T: Real>(data: &SampleSet<T>) -> HermitianMatrix<T> {
    let n = T::from_usize(data.len()).expect("sample count");
    let x = data.as_matrix();
    HermitianMatrix::from_hermitian_part(x * x.adjoint() * creal(T::one() / n), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn single_sample_outer_product() {
        let x = CVector::from_vec(vec![creal(1.0f64), cplx(0.0, 1.0)]);
        let s = sample_covariance(&SampleSet::new(1, 2, &[x]).unwrap());
        assert_eq!(s[(0, 0)], creal(1.0));
        assert_eq!(s[(0, 1)], cplx(0.0, -1.0));
        assert_eq!(s[(1, 0)], cplx(0.0, 1.0));
        assert!(s.is_psd());
    }

    #[test]
    fn repeated_sample_is_independent_of_n() {
        let x = CVector::from_vec(vec![cplx(1.0f64, 2.0), cplx(-0.5, 0.25), creal(3.0), cplx(0.0, -1.0)]);
        let one = sample_covariance(&SampleSet::new(2, 2, &[x.clone()]).unwrap());
        let many = sample_covariance(&SampleSet::new(2, 2, &vec![x; 7]).unwrap());
        assert!((one.as_matrix() - many.as_matrix()).norm() < 1e-12);
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(SampleSet::<f64>::new(2, 2, &[]).is_err());
        let a = CVector::from_element(4, creal(1.0f64));
        let b = CVector::from_element(3, creal(1.0f64));
        assert!(matches!(SampleSet::new(2, 2, &[a, b]), Err(Error::Argument(_))));
    }
}
