use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::filters::{apply_filter, StapFilter};
use crate::linalg::{CVector, HermitianMatrix};
use crate::scalar::{creal, Real};

/// `|α|²·|w^H d|² / (w^H Σ w)`.
pub fn sinr<T: Real>(w: &CVector<T>, d: &CVector<T>, alpha: Complex<T>, sigma_total: &HermitianMatrix<T>) -> Result<T> {
    if w.len() != d.len() || w.len() != sigma_total.dim() {
        return Err(Error::arg("filter, steering and covariance dimensions differ"));
    }
    if w.norm() == T::zero() {
        return Err(Error::arg("filter weight vector is zero"));
    }
    let denom = w.dotc(&(sigma_total.as_matrix() * w)).re;
    if denom <= T::zero() {
        return Err(Error::Validation("w^H Σ w ≤ 0; Σ must be positive definite".into()));
    }
    Ok(alpha.norm_sqr() * w.dotc(d).norm_sqr() / denom)
}

/// SINR loss with the cancelled-target condition reported separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinrLoss<T> {
    pub value: T,
    /// `F̂ d = 0`: the filter removed the target entirely (value is 0).
    pub target_cancelled: bool,
}

/// Positive-definite `Σ` factored once for repeated SINR-loss evaluations.
#[derive(Clone, Debug)]
pub struct SinrReference<T: Real> {
    sigma: HermitianMatrix<T>,
    chol: Cholesky<Complex<T>, Dyn>,
}

impl<T: Real> SinrReference<T> {
    pub fn new(sigma_total: &HermitianMatrix<T>) -> Result<Self> {
        let chol = Cholesky::new(sigma_total.as_matrix().clone())
            .ok_or_else(|| Error::Validation("covariance is not positive definite".into()))?;
        Ok(Self {
            sigma: sigma_total.clone(),
            chol,
        })
    }

    pub fn sigma(&self) -> &HermitianMatrix<T> {
        &self.sigma
    }

    /// `d^H Σ⁻¹ d`, the SINR of the optimal filter `Σ⁻¹d` at `|α| = 1`.
    pub fn sinr_max(&self, d: &CVector<T>) -> T {
        d.dotc(&self.chol.solve(d)).re
    }

    /// `ρ = SINR(w) / SINR_max` for an explicit weight vector.
    pub fn loss_for_weights(&self, w: &CVector<T>, d: &CVector<T>) -> Result<SinrLoss<T>> {
        if w.len() != d.len() || w.len() != self.sigma.dim() {
            return Err(Error::arg("filter, steering and covariance dimensions differ"));
        }
        let gain = w.dotc(d).norm_sqr();
        if w.norm() <= T::tol(1e-14) * d.norm() || gain == T::zero() {
            return Ok(SinrLoss {
                value: T::zero(),
                target_cancelled: true,
            });
        }
        let out = sinr(w, d, creal(T::one()), &self.sigma)?;
        Ok(SinrLoss {
            value: out / self.sinr_max(d),
            target_cancelled: false,
        })
    }

    /// `ρ` for the filter weights `w = F̂ d`.
    pub fn loss(&self, f_hat: &StapFilter<T>, d: &CVector<T>) -> Result<SinrLoss<T>> {
        self.loss_for_weights(&apply_filter(f_hat, d)?, d)
    }
}

/// `ρ = SINR_out / SINR_max` for the filter `F̂` and steering `d`.
pub fn sinr_loss<T: Real>(f_hat: &StapFilter<T>, d: &CVector<T>, sigma_total: &HermitianMatrix<T>) -> Result<SinrLoss<T>> {
    SinrReference::new(sigma_total)?.loss(f_hat, d)
}

/// Temporal-stage covariance `Σ_t = (g ⊗ I)^H Σ (g ⊗ I)` seen behind a fixed spatial weight `g`.
pub fn temporal_stage_covariance<T: Real>(sigma_total: &HermitianMatrix<T>, g: &CVector<T>) -> Result<HermitianMatrix<T>> {
    let p = g.len();
    if p == 0 || sigma_total.dim() % p != 0 {
        return Err(Error::arg("spatial weight length does not divide the covariance size"));
    }
    let q = sigma_total.dim() / p;
    let s = sigma_total.as_matrix();
    let mut out = DMatrix::zeros(q, q);
    for j in 0..p {
        for i in 0..p {
            let w = g[i].conj() * g[j];
            out += s.view((i * q, j * q), (q, q)) * w;
        }
    }
    Ok(HermitianMatrix::from_hermitian_part(out, sigma_total.is_psd()))
}

/// Temporal-stage SINR loss `ρ_t` for the filter `F_A ⊗ F̂_B` relative to the best temporal stage
/// behind the same spatial stage. `g = F_A d_A`; `w_b = F̂_B d_B`.
pub fn temporal_stage_loss<T: Real>(
    sigma_total: &HermitianMatrix<T>,
    g: &CVector<T>,
    w_b: &CVector<T>,
    d_b: &CVector<T>,
) -> Result<SinrLoss<T>> {
    let st = temporal_stage_covariance(sigma_total, g)?;
    SinrReference::new(&st)?.loss_for_weights(w_b, d_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{lr_stap_filter, FilterKind};
    use crate::scalar::cplx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> CVector<f64> {
        CVector::from_fn(n, |_, _| cplx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn pd(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix<f64> {
        let g = DMatrix::from_fn(n, n, |_, _| cplx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        HermitianMatrix::from_hermitian_part(&g * g.adjoint() + DMatrix::identity(n, n) * creal(0.05), true)
    }

    #[test]
    fn matched_filter_in_white_noise() {
        let d = CVector::from_vec(vec![creal(0.6), cplx(0.0, 0.8)]);
        let v: f64 = sinr(&d, &d, cplx(0.0, 1.0), &HermitianMatrix::identity(2)).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scale_invariance_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = pd(&mut rng, 4);
        let d = rand_vec(&mut rng, 4);
        let w = rand_vec(&mut rng, 4);
        let a = sinr(&w, &d, creal(1.0), &s).unwrap();
        let b = sinr(&(&w * cplx(-2.0, 3.0)), &d, creal(1.0), &s).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!(sinr(&CVector::zeros(4), &d, creal(1.0), &s).is_err());
        let neg = HermitianMatrix::from_diagonal(&[-1.0, -1.0, -1.0, -1.0]);
        assert!(matches!(sinr(&w, &d, creal(1.0), &neg), Err(Error::Validation(_))));
    }

    #[test]
    fn optimal_weights_beat_random_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = pd(&mut rng, 5);
        let d = rand_vec(&mut rng, 5);
        let reference = SinrReference::new(&s).unwrap();
        let best = reference.sinr_max(&d);
        let w_opt = s.as_matrix().clone().lu().solve(&d).unwrap();
        assert!((sinr(&w_opt, &d, creal(1.0), &s).unwrap() - best).abs() < 1e-10 * best);
        for _ in 0..10_000 {
            let w = rand_vec(&mut rng, 5);
            assert!(sinr(&w, &d, creal(1.0), &s).unwrap() <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn identity_filter_loses_against_clutter() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = pd(&mut rng, 6);
        let d = rand_vec(&mut rng, 6).normalize();
        let f = lr_stap_filter(&s, 2, 3, 0).unwrap();
        let rho = sinr_loss(&f, &d, &s).unwrap();
        assert!(!rho.target_cancelled && rho.value > 0.0 && rho.value < 1.0);
    }

    #[test]
    fn cancelled_target_reports_zero() {
        let d = CVector::from_vec(vec![creal(1.0), creal(0.0)]);
        let f = StapFilter::from_bases(FilterKind::LowRank, 1, 2, None, None, Some(DMatrix::from_column_slice(2, 1, &[creal(1.0), creal(0.0)]))).unwrap();
        let rho = sinr_loss(&f, &d, &HermitianMatrix::identity(2)).unwrap();
        assert!(rho.target_cancelled);
        assert_eq!(rho.value, 0.0);
    }

    #[test]
    fn temporal_stage_matches_full_ratio() {
        // For F = F_A ⊗ F_B the full-vector SINR equals the temporal-stage SINR scaled by |g^H d_A|².
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = pd(&mut rng, 6);
        let (da, db) = (rand_vec(&mut rng, 2), rand_vec(&mut rng, 3));
        let (g, wb) = (rand_vec(&mut rng, 2), rand_vec(&mut rng, 3));
        let full = sinr(&g.kronecker(&wb), &da.kronecker(&db), creal(1.0), &s).unwrap();
        let st = temporal_stage_covariance(&s, &g).unwrap();
        let stage = sinr(&wb, &db, creal(1.0), &st).unwrap() * g.dotc(&da).norm_sqr();
        assert!((full - stage).abs() < 1e-10 * full);
        let rho = temporal_stage_loss(&s, &g, &wb, &db).unwrap();
        assert!(rho.value > 0.0 && rho.value <= 1.0 + 1e-12);
    }
}
