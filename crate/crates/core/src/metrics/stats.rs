use crate::error::{Error, Result};
use crate::estimation::SampleSet;
use crate::filters::StapFilter;
use crate::scalar::Real;

/// `(1/M)·Σ ‖F x_m‖²` over a test set.
pub fn ms_residual<T: Real>(f: &StapFilter<T>, test: &SampleSet<T>) -> Result<T> {
    let y = f.apply_columns(test.as_matrix())?;
    Ok(y.norm_squared() / T::from_usize(test.len()).expect("count"))
}

/// Mann–Whitney AUC: fraction of `(h1, h0)` pairs with `h1 > h0`, ties counting ½.
pub fn roc_auc(h0_scores: &[f64], h1_scores: &[f64]) -> Result<f64> {
    if h0_scores.is_empty() || h1_scores.is_empty() {
        return Err(Error::arg("both score lists must be non-empty"));
    }
    if h0_scores.iter().chain(h1_scores).any(|v| v.is_nan()) {
        return Err(Error::arg("scores contain NaN"));
    }
    let mut h0 = h0_scores.to_vec();
    h0.sort_by(f64::total_cmp);
    let mut wins = 0.0;
    for &s in h1_scores {
        let below = h0.partition_point(|&v| v < s);
        let not_above = h0.partition_point(|&v| v <= s);
        wins += below as f64 + 0.5 * (not_above - below) as f64;
    }
    Ok(wins / (h0.len() as f64 * h1_scores.len() as f64))
}

/// RMS of the `k` brightest target pixels over the RMS of all non-target pixels.
pub fn contrast_ratio(filtered_stats: &[f64], target_pixels: &[usize], k: usize) -> Result<f64> {
    if target_pixels.is_empty() {
        return Err(Error::arg("target pixel set is empty"));
    }
    if k == 0 || k > target_pixels.len() {
        return Err(Error::arg(format!("k = {k} must lie in 1..={}", target_pixels.len())));
    }
    if let Some(&bad) = target_pixels.iter().find(|&&i| i >= filtered_stats.len()) {
        return Err(Error::arg(format!("target pixel {bad} out of range")));
    }
    let mut is_target = vec![false; filtered_stats.len()];
    for &i in target_pixels {
        is_target[i] = true;
    }
    let background: Vec<f64> = filtered_stats
        .iter()
        .zip(&is_target)
        .filter(|(_, t)| !**t)
        .map(|(v, _)| *v)
        .collect();
    if background.is_empty() {
        return Err(Error::arg("no background pixels"));
    }
    let mut targets: Vec<f64> = target_pixels.iter().map(|&i| filtered_stats[i]).collect();
    targets.sort_by(|a, b| b.total_cmp(a));
    let rms = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
    let bg = rms(&background);
    if bg == 0.0 {
        return Err(Error::Degenerate("background RMS is zero".into()));
    }
    Ok(rms(&targets[..k]) / bg)
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::lr_stap_filter;
    use crate::linalg::HermitianMatrix;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn auc_edge_cases() {
        let a = [0.3, 1.0, 2.0, 2.0];
        assert_eq!(roc_auc(&a, &a).unwrap(), 0.5);
        assert_eq!(roc_auc(&[0.0, 1.0], &[2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(roc_auc(&[2.0, 3.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!(roc_auc(&[], &[1.0]).is_err());
    }

    #[test]
    fn auc_matches_brute_force() {
        let h0 = [0.1, 0.5, 0.5, 0.9, 1.3];
        let h1 = [0.5, 1.0, 0.05, 2.0];
        let mut w = 0.0;
        for a in h1 {
            for b in h0 {
                w += if a > b { 1.0 } else if a == b { 0.5 } else { 0.0 };
            }
        }
        assert!((roc_auc(&h0, &h1).unwrap() - w / 20.0).abs() < 1e-15);
    }

    #[test]
    fn auc_gaussian_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let h0: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let h1: Vec<f64> = (0..n).map(|_| { let z: f64 = StandardNormal.sample(&mut rng); 1.0 + z }).collect();
        // Φ(1/√2) via the complementary error function identity Φ(x) = erfc(−x/√2)/2.
        let want = 0.5 * libm_erfc(-0.5);
        assert!((want - 0.760).abs() < 1e-3);
        assert!((roc_auc(&h0, &h1).unwrap() - want).abs() < 0.01);
    }

    /// erfc by its continued-fraction-free series (adequate for |x| ≤ 1).
    fn libm_erfc(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = x;
        for k in 0..60 {
            sum += term / (2 * k + 1) as f64;
            term *= -x * x / (k + 1) as f64;
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
    }

    #[test]
    fn contrast_cases() {
        let flat = vec![2.0; 30];
        let targets: Vec<usize> = (0..12).collect();
        assert!((contrast_ratio(&flat, &targets, 10).unwrap() - 1.0).abs() < 1e-15);
        let v: Vec<f64> = (0..30).map(|i| 1.0 + i as f64).collect();
        let doubled: Vec<f64> = v.iter().map(|x| 2.0 * x).collect();
        let a = contrast_ratio(&v, &targets, 10).unwrap();
        assert!((a - contrast_ratio(&doubled, &targets, 10).unwrap()).abs() < 1e-14);
        let all: Vec<usize> = (0..30).collect();
        assert!(contrast_ratio(&v, &all, 10).is_err());
        assert!(contrast_ratio(&v, &targets, 13).is_err());
    }

    #[test]
    fn ms_residual_cases() {
        let x = DMatrix::from_fn(4, 3, |i, j| Complex64::new(i as f64, j as f64));
        let data = SampleSet::from_matrix(2, 2, x.clone()).unwrap();
        let s = HermitianMatrix::identity(4);
        let id = lr_stap_filter(&s, 2, 2, 0).unwrap();
        assert!((ms_residual(&id, &data).unwrap() - x.norm_squared() / 3.0).abs() < 1e-12);
        let zero = lr_stap_filter(&s, 2, 2, 4).unwrap();
        assert!(ms_residual(&zero, &data).unwrap() < 1e-24);
    }

    #[test]
    fn mean_stderr_basic() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
