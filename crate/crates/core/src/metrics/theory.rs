use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{eig_dense, CVector, HermitianMatrix};
use crate::scalar::{creal, Real};

/// Closed-form expected SINR-loss curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoryCurve {
    /// `1 − r/n`.
    LowRank,
    /// `1 − 1/n`.
    KronSpatial,
    /// `1 − κ·r_b/n`.
    KronTemporalGivenH,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TheoryParams {
    pub r: usize,
    pub n: usize,
    pub r_b: usize,
    pub kappa: f64,
}

pub fn theory_sinr_loss(method: TheoryCurve, params: &TheoryParams) -> f64 {
    let n = params.n as f64;
    match method {
        TheoryCurve::LowRank => 1.0 - params.r as f64 / n,
        TheoryCurve::KronSpatial => 1.0 - 1.0 / n,
        TheoryCurve::KronTemporalGivenH => 1.0 - params.kappa * params.r_b as f64 / n,
    }
}

/// `κ = d̃^H A d̃ / h̃^H A h̃` with `d̃` the normalised component of `d_A` orthogonal to `h̃`.
pub fn kappa<T: Real>(a_true: &HermitianMatrix<T>, h_tilde: &CVector<T>, d_a: &CVector<T>) -> Result<T> {
    let p = a_true.dim();
    if h_tilde.len() != p || d_a.len() != p {
        return Err(Error::arg("steering and spatial factor dimensions differ"));
    }
    let hn = h_tilde.norm();
    if hn == T::zero() {
        return Err(Error::Degenerate("h̃ is zero".into()));
    }
    let h = h_tilde * creal(T::one() / hn);
    let resid = d_a - &h * h.dotc(d_a);
    let rn = resid.norm();
    if rn <= T::tol(1e-12) * d_a.norm() {
        return Err(Error::Degenerate("steering d_A is parallel to h̃".into()));
    }
    let dt = resid * creal(T::one() / rn);
    let a = a_true.as_matrix();
    let den = h.dotc(&(a * &h)).re;
    if den <= T::zero() {
        return Err(Error::Degenerate("h̃^H A h̃ is not positive".into()));
    }
    let num = dt.dotc(&(a * &dt)).re;
    Ok(num.max(T::zero()) / den)
}

/// Leading eigenpair of the pulse-averaged spatial matrix.
#[derive(Clone, Debug)]
pub struct NaiveSpatial<T: Real> {
    pub psi: T,
    pub h_hat: CVector<T>,
    /// The leading eigenvalue is (numerically) repeated, so `h_hat` is arbitrary within its eigenspace.
    pub degenerate: bool,
}

/// `EIG₁((1/q)·Σ_k S_spatial(k))` with `S_spatial(k)[i,j] = s[i·q+k, j·q+k]`.
pub fn naive_spatial_estimate<T: Real>(s: &HermitianMatrix<T>, p: usize, q: usize) -> Result<NaiveSpatial<T>> {
    if p == 0 || q == 0 || s.dim() != p * q {
        return Err(Error::arg(format!("covariance of size {} does not match p={p}, q={q}", s.dim())));
    }
    let m = s.as_matrix();
    let inv_q = creal(T::one() / T::from_usize(q).expect("q"));
    let t = DMatrix::from_fn(p, p, |i, j| {
        (0..q).fold(creal(T::zero()), |acc, k| acc + m[(i * q + k, j * q + k)]) * inv_q
    });
    let e = eig_dense(crate::linalg::symmetrize(t));
    let psi = e.values[0];
    let degenerate = p > 1 && (e.values[0] - e.values[1]) <= T::tol(1e-10) * psi.abs();
    Ok(NaiveSpatial {
        psi,
        h_hat: e.vectors.column(0).into_owned(),
        degenerate,
    })
}
