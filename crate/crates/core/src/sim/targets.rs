use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimation::SampleSet;
use crate::filters::SteeringVector;
use crate::linalg::CVector;

/// A constant-Doppler moving target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetSpec {
    pub doppler: f64,
    pub amplitude: Complex64,
    pub spatial_gain: f64,
}

/// `α·a(f) ⊗ b(f)`.
pub fn target_return(spec: &TargetSpec, p: usize, q: usize) -> CVector<f64> {
    SteeringVector::new(p, q, spec.doppler, spec.spatial_gain).full() * spec.amplitude
}

/// Training-set contamination by sparse moving targets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorruptionSpec {
    pub fraction: f64,
    /// `|α|` is uniform over `[amp_min, amp_max]`; phase uniform.
    pub amp_min: f64,
    pub amp_max: f64,
    pub spatial_gain: f64,
}

impl CorruptionSpec {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::arg(format!("corruption fraction {} outside [0, 1]", self.fraction)));
        }
        if !(self.amp_min >= 0.0 && self.amp_min <= self.amp_max && self.amp_max.is_finite()) {
            return Err(Error::arg(format!(
                "corruption amplitude range [{}, {}] is invalid",
                self.amp_min, self.amp_max
            )));
        }
        Ok(())
    }

    /// `⌈fraction·n⌉`, robust to representation error in `fraction`.
    pub fn count(&self, n: usize) -> usize {
        ((self.fraction * n as f64) - 1e-9).ceil().max(0.0) as usize
    }
}

/// Target with Doppler uniform on (−½, ½), `|α|` uniform on `[lo, hi]`, uniform phase.
pub fn random_target<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64, spatial_gain: f64) -> TargetSpec {
    let doppler = rng.random::<f64>() - 0.5;
    let mag = if hi > lo { rng.random_range(lo..=hi) } else { lo };
    let phase = rng.random::<f64>() * std::f64::consts::TAU;
    TargetSpec {
        doppler,
        amplitude: Complex64::from_polar(mag, phase),
        spatial_gain,
    }
}

/// Adds targets to a uniformly chosen `⌈fraction·n⌉` samples, drawing from `rng`.
pub fn corrupt_training_with<R: Rng + ?Sized>(
    data: &SampleSet<f64>,
    spec: &CorruptionSpec,
    rng: &mut R,
) -> Result<SampleSet<f64>> {
    spec.validate()?;
    let (p, q, n) = (data.p(), data.q(), data.len());
    let mut out = data.clone();
    let chosen = index::sample(rng, n, spec.count(n));
    for m in chosen.iter() {
        let t = random_target(rng, spec.amp_min, spec.amp_max, spec.spatial_gain);
        let mut col = out.as_matrix_mut().column_mut(m);
        col += target_return(&t, p, q);
    }
    Ok(out)
}

/// Seeded form of [`corrupt_training_with`]; the input set is left untouched.
pub fn corrupt_training(data: &SampleSet<f64>, spec: &CorruptionSpec, rng_seed: u64) -> Result<SampleSet<f64>> {
    corrupt_training_with(data, spec, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}
