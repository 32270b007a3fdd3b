use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{CVector, HermitianMatrix};

/// Generative SIRV clutter parameters.
///
/// Clutter covariance is `A ⊗ B` with `A = hh^H` (plus an optional secondary spatial
/// component) and `E[τ²] = 1`, so the total covariance is `A ⊗ B + σ²I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClutterScenario {
    pub p: usize,
    pub q: usize,
    /// Per-antenna calibration vector.
    pub h: CVector<f64>,
    /// `(eigenvalue, unit eigenvector ⊥ h)` of a rank-2 spatial mismatch.
    pub spatial_secondary: Option<(f64, CVector<f64>)>,
    pub b_true: HermitianMatrix<f64>,
    pub sigma2: f64,
    /// Texture degrees of freedom ν; `f64::INFINITY` gives Gaussian clutter.
    pub texture_dof: f64,
    pub rng_seed: u64,
}

/// Knobs for [`ClutterScenario::generate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub p: usize,
    pub q: usize,
    pub rank_b: usize,
    /// Spread of B's nonzero eigenvalues (log-uniform over this many decades).
    pub b_decades: f64,
    /// σ² relative to the mean per-element clutter power.
    pub noise_ratio: f64,
    pub texture_dof: f64,
    /// Secondary spatial eigenvalue relative to `‖h‖²`, if any.
    pub secondary_ratio: Option<f64>,
    pub calibration_gain_sd: f64,
    pub calibration_phase_sd: f64,
    pub seed: u64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            p: 3,
            q: 32,
            rank_b: 5,
            b_decades: 2.0,
            noise_ratio: 1e-4,
            texture_dof: 4.0,
            secondary_ratio: None,
            calibration_gain_sd: 0.1,
            calibration_phase_sd: 0.2,
            seed: 1,
        }
    }
}

pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn random_unit_orthogonal<R: Rng + ?Sized>(rng: &mut R, h: &CVector<f64>) -> CVector<f64> {
    loop {
        let mut v = CVector::from_fn(h.len(), |_, _| complex_normal(rng));
        let hn = h.norm_squared();
        v -= h * (h.dotc(&v) / hn);
        let n = v.norm();
        if n > 1e-8 {
            return v / Complex64::from(n);
        }
    }
}

impl ClutterScenario {
    /// Validates an explicitly specified scenario.
    pub fn new(
        h: CVector<f64>,
        spatial_secondary: Option<(f64, CVector<f64>)>,
        b_true: HermitianMatrix<f64>,
        sigma2: f64,
        texture_dof: f64,
        rng_seed: u64,
    ) -> Result<Self> {
        let (p, q) = (h.len(), b_true.dim());
        if p == 0 || q == 0 {
            return Err(Error::arg("p and q must be positive"));
        }
        if h.norm() == 0.0 || h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("calibration vector h must be finite and non-zero".into()));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Validation(format!("noise floor σ² must be positive, got {sigma2}")));
        }
        if !(texture_dof > 0.0) {
            return Err(Error::Validation(format!("texture dof must be positive, got {texture_dof}")));
        }
        if !b_true.is_psd() {
            b_true.check_psd()?;
        }
        if let Some((lam, v)) = &spatial_secondary {
            let h2 = h.norm_squared();
            if !(*lam > 0.0 && *lam < h2) {
                return Err(Error::Validation(format!(
                    "secondary spatial eigenvalue {lam} must lie in (0, ‖h‖² = {h2})"
                )));
            }
            if v.len() != p || (v.norm() - 1.0).abs() > 1e-10 || h.dotc(v).norm() > 1e-10 * h.norm() {
                return Err(Error::Validation("secondary eigenvector must be a unit vector orthogonal to h".into()));
            }
        }
        let b_true = HermitianMatrix::new(b_true.into_inner(), true)?;
        Ok(Self {
            p,
            q,
            h,
            spatial_secondary,
            b_true,
            sigma2,
            texture_dof,
            rng_seed,
        })
    }

    /// Draws `h`, B and the secondary direction from `params.seed`.
    ///
    /// `h` has gains `1 + gain_sd·N(0,1)` and phases `N(0, phase_sd²)`, scaled to `‖h‖² = p`.
    /// B has `rank_b` eigenvalues `10^(−decades·U)` on a random subspace, scaled to trace `q`.
    pub fn generate(params: &ScenarioParams) -> Result<Self> {
        let ScenarioParams { p, q, rank_b, .. } = *params;
        if p == 0 || q == 0 {
            return Err(Error::Config("scenario.p and scenario.q must be positive".into()));
        }
        if rank_b == 0 || rank_b > q {
            return Err(Error::Config(format!("scenario.rank_b must lie in 1..={q}, got {rank_b}")));
        }
        if !(params.noise_ratio > 0.0) {
            return Err(Error::Config("scenario.noise_ratio must be positive".into()));
        }
        if !(params.b_decades >= 0.0) {
            return Err(Error::Config("scenario.b_decades must be non-negative".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

        let mut h = CVector::from_fn(p, |_, _| {
            let g: f64 = rng.sample(StandardNormal);
            let ph: f64 = rng.sample(StandardNormal);
            Complex64::from_polar(1.0 + params.calibration_gain_sd * g, params.calibration_phase_sd * ph)
        });
        let scale = (p as f64).sqrt() / h.norm();
        h *= Complex64::from(scale);

        let mut evals: Vec<f64> = (0..rank_b)
            .map(|_| 10f64.powf(-params.b_decades * rng.random::<f64>()))
            .collect();
        evals.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        let total: f64 = evals.iter().sum();
        let g = DMatrix::from_fn(q, q, |_, _| complex_normal(&mut rng));
        let u = g.qr().q().columns(0, rank_b).into_owned();
        let mut b = DMatrix::zeros(q, q);
        for (k, lam) in evals.iter().enumerate() {
            let c = u.column(k);
            b.ger(Complex64::from(lam * q as f64 / total), &c, &c.conjugate(), Complex64::from(1.0));
        }
        let b_true = HermitianMatrix::new(crate::linalg::symmetrize(b), true)?;

        let secondary = match params.secondary_ratio {
            Some(r) if r > 0.0 => Some((r * h.norm_squared(), random_unit_orthogonal(&mut rng, &h))),
            Some(r) if r < 0.0 => return Err(Error::Config("scenario.secondary_ratio must be non-negative".into())),
            _ => None,
        };

        let a_trace = h.norm_squared() + secondary.as_ref().map_or(0.0, |s| s.0);
        let clutter_power = a_trace * b_true.trace_re() / (p * q) as f64;
        Self::new(
            h,
            secondary,
            b_true,
            params.noise_ratio * clutter_power,
            params.texture_dof,
            params.seed.wrapping_add(0x5eed),
        )
    }

    /// Spatial factor `hh^H (+ λ v v^H)`.
    pub fn a_true(&self) -> HermitianMatrix<f64> {
        let mut a = &self.h * self.h.adjoint();
        if let Some((lam, v)) = &self.spatial_secondary {
            a += v * v.adjoint() * Complex64::from(*lam);
        }
        HermitianMatrix::from_hermitian_part(a, true)
    }

    /// Spatial rank of the clutter (1, or 2 with the secondary component).
    pub fn rank_a(&self) -> usize {
        1 + usize::from(self.spatial_secondary.is_some())
    }

    /// Mean per-element clutter power `tr(A) tr(B) / pq`.
    pub fn clutter_power(&self) -> f64 {
        self.a_true().trace_re() * self.b_true.trace_re() / (self.p * self.q) as f64
    }
}

/// `(A ⊗ B, A ⊗ B + σ²I)`.
pub fn scenario_covariance(sc: &ClutterScenario) -> (HermitianMatrix<f64>, HermitianMatrix<f64>) {
    let clutter = HermitianMatrix::kron(&sc.a_true(), &sc.b_true);
    let total = clutter.add_identity(sc.sigma2);
    (clutter, total)
}
