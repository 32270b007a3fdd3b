use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use std::ops::Deref;

use super::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Dense complex column vector.
pub type CVector<T> = DVector<Complex<T>>;

/// Dense complex matrix, column-major (nalgebra layout, used repo-wide).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T: Real>(DMatrix<Complex<T>>);

impl<T: Real> ComplexMatrix<T> {
    /// Wraps external data, rejecting non-finite entries.
    pub fn new(m: DMatrix<Complex<T>>) -> Result<Self> {
        if m.iter().any(|z| !is_finite(z)) {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    /// Wraps data produced by arithmetic on already-validated values.
    pub fn from_dmatrix(m: DMatrix<Complex<T>>) -> Self {
        Self(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds from real entries given row by row.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self(DMatrix::from_fn(rows, cols, |i, j| creal(T::lit(entries[i * cols + j]))))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex<T>> {
        self.0
    }

    pub fn frobenius_norm(&self) -> T {
        self.0.norm()
    }

    pub fn scale(&self, a: Complex<T>) -> Self {
        Self(&self.0 * a)
    }
}

impl<T: Real> Deref for ComplexMatrix<T> {
    type Target = DMatrix<Complex<T>>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl<T: Real> AsRef<DMatrix<Complex<T>>> for ComplexMatrix<T> {
    fn as_ref(&self) -> &DMatrix<Complex<T>> {
        &self.0
    }
}

/// Dense complex Hermitian matrix with a positive-semidefinite hint.
///
/// Storage is always exactly Hermitian: inputs within tolerance are replaced by
/// `(M + M^H)/2` on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    m: DMatrix<Complex<T>>,
    psd: bool,
}

/// Relative Hermitian drift accepted before symmetrisation.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue allowed for a psd matrix, relative to the largest.
pub const PSD_TOL: f64 = 1e-10;

impl<T: Real> HermitianMatrix<T> {
    /// Validates and symmetrises `m`. When `is_psd` is set the spectrum is checked too.
    pub fn new(m: DMatrix<Complex<T>>, is_psd: bool) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Validation(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !is_finite(z)) {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        let drift = (&m - m.adjoint()).norm();
        let scale = m.norm();
        if drift > T::tol(HERMITIAN_TOL) * scale {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian: ‖M − M^H‖_F = {drift:e} vs ‖M‖_F = {scale:e}"
            )));
        }
        let h = Self {
            m: symmetrize(m),
            psd: false,
        };
        if is_psd {
            h.check_psd()?;
            Ok(Self { psd: true, ..h })
        } else {
            Ok(h)
        }
    }

    /// For matrices Hermitian in exact arithmetic (products, sums of outer products):
    /// symmetrises without the drift check.
    pub(crate) fn from_hermitian_part(m: DMatrix<Complex<T>>, psd: bool) -> Self {
        Self {
            m: symmetrize(m),
            psd,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
            psd: true,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: DMatrix::zeros(n, n),
            psd: true,
        }
    }

    /// `v v^H`.
    pub fn outer(v: &CVector<T>) -> Self {
        Self::from_hermitian_part(v * v.adjoint(), true)
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(d: &[T]) -> Self {
        let psd = d.iter().all(|x| *x >= T::zero());
        let m = DMatrix::from_diagonal(&DVector::from_iterator(d.len(), d.iter().map(|x| creal(*x))));
        Self { m, psd }
    }

    /// `A ⊗ B` of two Hermitian matrices; psd when both are.
    pub fn kron(a: &Self, b: &Self) -> Self {
        Self {
            m: a.m.kronecker(&b.m),
            psd: a.psd && b.psd,
        }
    }

    /// Returns `Err` if the smallest eigenvalue is below `-PSD_TOL * largest`.
    pub fn check_psd(&self) -> Result<()> {
        if self.dim() == 0 {
            return Ok(());
        }
        let eig = hermitian_eig(self);
        let top = eig.values[0].abs();
        let bottom = eig.values[eig.values.len() - 1];
        if bottom < -(T::tol(PSD_TOL) * top) {
            return Err(Error::Validation(format!(
                "matrix is not positive semidefinite: λ_min = {bottom:e}, λ_max = {top:e}"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn is_psd(&self) -> bool {
        self.psd
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.m
    }

    pub fn into_inner(self) -> DMatrix<Complex<T>> {
        self.m
    }

    pub fn to_complex(&self) -> ComplexMatrix<T> {
        ComplexMatrix(self.m.clone())
    }

    pub fn frobenius_norm(&self) -> T {
        self.m.norm()
    }

    pub fn trace_re(&self) -> T {
        self.m.diagonal().iter().fold(T::zero(), |acc, z| acc + z.re)
    }

    /// Multiplies by a real scalar; the psd hint survives for non-negative factors.
    pub fn scale(&self, a: T) -> Self {
        Self {
            m: &self.m * creal(a),
            psd: self.psd && a >= T::zero(),
        }
    }

    /// `self + a·I`.
    pub fn add_identity(&self, a: T) -> Self {
        let n = self.dim();
        let mut m = self.m.clone();
        for i in 0..n {
            m[(i, i)] += creal(a);
        }
        Self {
            m,
            psd: self.psd && a >= T::zero(),
        }
    }
}

impl<T: Real> Deref for HermitianMatrix<T> {
    type Target = DMatrix<Complex<T>>;
    fn deref(&self) -> &Self::Target {
        &self.m
    }
}

impl<T: Real> AsRef<DMatrix<Complex<T>>> for HermitianMatrix<T> {
    fn as_ref(&self) -> &DMatrix<Complex<T>> {
        &self.m
    }
}

/// `(M + M^H) / 2`.
pub fn symmetrize<T: Real>(m: DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let n = m.nrows();
    let half = T::lit(0.5);
    let mut out = m;
    for j in 0..n {
        for i in 0..j {
            let v = (out[(i, j)] + out[(j, i)].conj()) * half;
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
        out[(j, j)] = creal(out[(j, j)].re);
    }
    out
}

fn is_finite<T: Real>(z: &Complex<T>) -> bool {
    let f = |x: T| x.to_f64().is_some_and(f64::is_finite);
    f(z.re) && f(z.im)
}
