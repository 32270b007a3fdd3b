use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::scalar::{cplx, creal, Real};

/// Unit-norm spatial and temporal steering pair for one normalized Doppler.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringVector<T: Real> {
    pub spatial: CVector<T>,
    pub temporal: CVector<T>,
    /// Cycles per pulse.
    pub doppler: T,
}

impl<T: Real> SteeringVector<T> {
    /// `a(f) = e^{j2π i·gain·f}/√p`, `b(f) = e^{j2π f k}/√q` (0-based `i`, `k`).
    pub fn new(p: usize, q: usize, doppler: T, spatial_gain: T) -> Self {
        Self {
            spatial: phase_ramp(p, spatial_gain * doppler),
            temporal: phase_ramp(q, doppler),
            doppler,
        }
    }

    /// Full steering vector `a ⊗ b` (antenna-major).
    pub fn full(&self) -> CVector<T> {
        self.spatial.kronecker(&self.temporal)
    }

    pub fn p(&self) -> usize {
        self.spatial.len()
    }

    pub fn q(&self) -> usize {
        self.temporal.len()
    }
}

/// `e^{j2π·step·k}/√n`, `k = 0..n`.
pub fn phase_ramp<T: Real>(n: usize, step: T) -> CVector<T> {
    let scale = T::one() / T::from_usize(n).expect("length").sqrt();
    CVector::from_fn(n, |k, _| {
        // Reduce the phase modulo one cycle in f64 before the trig call so f32 stays accurate.
        let cycles = (step.to_f64_lossy() * k as f64).rem_euclid(1.0);
        let theta = T::lit(cycles) * T::two_pi();
        cplx(theta.cos() * scale, theta.sin() * scale)
    })
}

pub fn steering_bank<T: Real>(p: usize, q: usize, dopplers: &[T], spatial_gain: T) -> Result<Vec<SteeringVector<T>>> {
    if dopplers.is_empty() {
        return Err(Error::arg("steering bank needs at least one Doppler"));
    }
    if p == 0 || q == 0 {
        return Err(Error::arg("p and q must be positive"));
    }
    Ok(dopplers
        .iter()
        .map(|&f| SteeringVector::new(p, q, f, spatial_gain))
        .collect())
}

/// `n` equispaced Dopplers covering (−½, ½): bin midpoints `(i + ½)/n − ½`.
pub fn doppler_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64 - 0.5).collect()
}

/// Temporal steering vectors of a bank as the columns of a `q × N` matrix.
pub fn temporal_matrix<T: Real>(bank: &[SteeringVector<T>]) -> DMatrix<Complex<T>> {
    let q = bank.first().map_or(0, |s| s.q());
    DMatrix::from_fn(q, bank.len(), |k, i| bank[i].temporal[k])
}

/// Unit vector `e_k` of length `n`.
pub(crate) fn unit<T: Real>(n: usize, k: usize) -> CVector<T> {
    let mut v = CVector::zeros(n);
    v[k] = creal(T::one());
    v
}
