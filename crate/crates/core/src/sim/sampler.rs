use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution};

use super::scenario::{complex_normal, ClutterScenario};
use crate::estimation::SampleSet;
use crate::linalg::{hermitian_eig, HermitianMatrix, PSD_TOL};

/// Draws SIRV clutter-plus-noise samples `x = τ·vec(L_A G L_Bᵀ) + σ·w` for a scenario.
#[derive(Clone, Debug)]
pub struct ClutterSampler {
    p: usize,
    q: usize,
    l_a: DMatrix<Complex64>,
    l_b: DMatrix<Complex64>,
    sigma: f64,
    texture: Option<ChiSquared<f64>>,
    dof: f64,
}

/// Eigen square root `U·diag(√λ)`, valid for singular psd matrices.
///
/// Eigenvalues below `PSD_TOL·λ₁` are rounding noise of an exactly low-rank factor and are dropped.
fn eig_sqrt(m: &HermitianMatrix<f64>) -> DMatrix<Complex64> {
    let e = hermitian_eig(m);
    let floor = PSD_TOL * e.values.get(0).copied().unwrap_or(0.0);
    let mut l = e.vectors;
    for (mut col, lam) in l.column_iter_mut().zip(e.values.iter()) {
        let v = if *lam > floor { lam.sqrt() } else { 0.0 };
        col *= Complex64::from(v);
    }
    l
}

impl ClutterSampler {
    pub fn new(sc: &ClutterScenario) -> Self {
        let texture = sc
            .texture_dof
            .is_finite()
            .then(|| ChiSquared::new(sc.texture_dof).expect("positive dof"));
        Self {
            p: sc.p,
            q: sc.q,
            l_a: eig_sqrt(&sc.a_true()),
            l_b: eig_sqrt(&sc.b_true),
            sigma: sc.sigma2.sqrt(),
            texture,
            dof: sc.texture_dof,
        }
    }

    /// Texture amplitude `τ` with `τ² ~ χ²_ν/ν`.
    pub fn texture<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.texture {
            Some(chi) => (chi.sample(rng) / self.dof).sqrt(),
            None => 1.0,
        }
    }

    /// `n` samples as the columns of a `pq × n` matrix.
    pub fn draw_matrix<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> DMatrix<Complex64> {
        let (p, q) = (self.p, self.q);
        let mut out = DMatrix::zeros(p * q, n);
        let l_bt = self.l_b.transpose();
        for m in 0..n {
            let g = DMatrix::from_fn(p, q, |_, _| complex_normal(rng));
            let tau = self.texture(rng);
            let x = &self.l_a * g * &l_bt;
            let mut col = out.column_mut(m);
            for i in 0..p {
                for k in 0..q {
                    col[i * q + k] = x[(i, k)] * tau + complex_normal(rng) * self.sigma;
                }
            }
        }
        out
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> SampleSet<f64> {
        SampleSet::from_matrix(self.p, self.q, self.draw_matrix(rng, n)).expect("n ≥ 1 and matching size")
    }
}

/// `n` samples from the scenario's own seeded stream.
pub fn sample_clutter(sc: &ClutterScenario, n: usize) -> crate::Result<SampleSet<f64>> {
    if n == 0 {
        return Err(crate::Error::arg("sample count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sc.rng_seed);
    Ok(ClutterSampler::new(sc).draw(&mut rng, n))
}
