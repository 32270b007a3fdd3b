use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eig_dense, rearrange, symmetrize, HermitianMatrix};
use crate::scalar::{creal, Real};

fn factor_dims<T: Real>(s: &HermitianMatrix<T>, factor: &HermitianMatrix<T>) -> Result<usize> {
    let (n, k) = (s.dim(), factor.dim());
    if k == 0 || n % k != 0 {
        return Err(Error::arg(format!("factor of size {k} does not divide covariance size {n}")));
    }
    Ok(n / k)
}

/// `R_B = Σ_ij conj(a_ij)·S(i,j) / ‖A‖_F²`: the unconstrained minimiser of `‖S − A⊗B‖_F` over `B`.
pub fn contract_for_b<T: Real>(s: &HermitianMatrix<T>, a: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let q = factor_dims(s, a)?;
    let out = contract_b_raw(s.as_matrix(), a.as_matrix(), a.dim(), q)?;
    Ok(HermitianMatrix::from_hermitian_part(out, false))
}

/// `R_A[i,j] = ⟨vec B, vec S(i,j)⟩ / ‖B‖_F²`: the unconstrained minimiser over `A`.
pub fn contract_for_a<T: Real>(s: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let p = factor_dims(s, b)?;
    let out = contract_a_raw(s.as_matrix(), b.as_matrix(), p, b.dim())?;
    Ok(HermitianMatrix::from_hermitian_part(out, false))
}

pub(crate) fn contract_b_raw<T: Real>(
    s: &DMatrix<Complex<T>>,
    a: &DMatrix<Complex<T>>,
    p: usize,
    q: usize,
) -> Result<DMatrix<Complex<T>>> {
    let norm2 = a.norm_squared();
    if norm2 == T::zero() {
        return Err(Error::Degenerate("spatial factor is zero".into()));
    }
    let mut out = DMatrix::zeros(q, q);
    for j in 0..p {
        for i in 0..p {
            let w = a[(i, j)].conj();
            if w == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            out += s.view((i * q, j * q), (q, q)) * w;
        }
    }
    Ok(out * creal(T::one() / norm2))
}

pub(crate) fn contract_a_raw<T: Real>(
    s: &DMatrix<Complex<T>>,
    b: &DMatrix<Complex<T>>,
    p: usize,
    q: usize,
) -> Result<DMatrix<Complex<T>>> {
    let norm2 = b.norm_squared();
    if norm2 == T::zero() {
        return Err(Error::Degenerate("temporal factor is zero".into()));
    }
    let inv = creal(T::one() / norm2);
    Ok(DMatrix::from_fn(p, p, |i, j| {
        let blk = s.view((i * q, j * q), (q, q));
        b.iter().zip(blk.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y) * inv
    }))
}

/// Closed-form nearest Kronecker product: the leading singular component of the
/// rearranged `s`, split into Hermitian factors with `‖A‖_F = 1`.
pub fn kron_fit_unconstrained<T: Real>(
    s: &HermitianMatrix<T>,
    p: usize,
    q: usize,
) -> Result<(HermitianMatrix<T>, HermitianMatrix<T>)> {
    let r = rearrange(s.as_matrix(), p, q)?.into_inner();
    if r.norm() == T::zero() {
        return Err(Error::Degenerate("rearranged covariance is identically zero".into()));
    }
    // Leading left singular vector from the small p²×p² Gram matrix.
    let gram = &r * r.adjoint();
    let eig = eig_dense(symmetrize(gram));
    let lambda = eig.values[0];
    if lambda <= T::zero() {
        return Err(Error::Degenerate("rearranged covariance has no positive singular value".into()));
    }
    let sigma = lambda.sqrt();
    let u = eig.vectors.column(0).into_owned();
    let v = r.adjoint() * &u * creal(T::one() / sigma);

    let mut a = DMatrix::from_fn(p, p, |i, j| u[i * p + j]);
    let mut b = DMatrix::from_fn(q, q, |m, n| v[m + n * q].conj() * creal(sigma));

    // a_ij = conj(a_ji)·e^{2iφ} for the Hermitian representative, so Σ a_ij a_ji carries e^{2iφ}.
    let z = (0..p)
        .flat_map(|i| (0..p).map(move |j| (i, j)))
        .fold(creal(T::zero()), |acc, (i, j)| acc + a[(i, j)] * a[(j, i)]);
    let phase = if z.modulus() > T::tol(1e-12) * a.norm_squared() {
        ComplexField::sqrt(z / creal(z.modulus()))
    } else {
        let tr = a.trace();
        if tr.modulus() > T::zero() {
            tr / creal(tr.modulus())
        } else {
            creal(T::one())
        }
    };
    a /= phase;
    b *= phase;
    if a.trace().re < T::zero() {
        a.neg_mut();
        b.neg_mut();
    }
    let a = symmetrize(a);
    let b = symmetrize(b);
    let scale = a.norm();
    Ok((
        HermitianMatrix::from_hermitian_part(a * creal(T::one() / scale), false),
        HermitianMatrix::from_hermitian_part(b * creal(scale), false),
    ))
}
