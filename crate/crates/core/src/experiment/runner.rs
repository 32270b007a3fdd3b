use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind, TemporalSteering};
use super::report::{ExperimentReport, Series};
use crate::error::{Error, Result};
use crate::estimation::{lr_kron, sample_covariance, LrKronOptions, SampleSet};
use crate::filters::{
    detection_statistics, doppler_grid, kron_classical_filter, kron_stap_filter, lr_stap_filter_from_samples,
    spatial_only_filter, steering_bank, FilterKind, StapFilter, SteeringVector,
};
use crate::linalg::{hermitian_eig, CVector};
use crate::metrics::{mean_stderr, naive_spatial_estimate, roc_auc, theory_sinr_loss, SinrReference, TheoryCurve, TheoryParams};
use crate::sim::{
    complex_normal, corrupt_training_with, scenario_covariance, target_return, ClutterSampler, ClutterScenario,
    TargetSpec,
};

/// Per-trial values: `values[trial][axis point][method]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialTable {
    pub methods: Vec<String>,
    pub axis: Vec<f64>,
    pub values: Vec<Vec<Vec<f64>>>,
}

impl TrialTable {
    /// All trial values of one method at one axis index.
    pub fn column(&self, method: &str, axis_index: usize) -> Option<Vec<f64>> {
        let j = self.methods.iter().position(|m| m == method)?;
        Some(self.values.iter().map(|t| t[axis_index][j]).collect())
    }
}

#[derive(Clone, Debug)]
pub struct DetailedRun {
    pub report: ExperimentReport,
    pub trials: TrialTable,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_detailed(config).map(|d| d.report)
}

/// Trial `t` draws from its own stream seeded by `seed + t`, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
    rng.set_stream(1);
    rng
}

pub fn run_experiment_detailed(config: &ExperimentConfig) -> Result<DetailedRun> {
    let kind = config.require_experiment()?;
    let scenario = config.validate()?;
    let start = Instant::now();
    let ctx = Context::new(config, kind, scenario)?;
    let values = (0..config.trials)
        .into_par_iter()
        .map(|t| ctx.trial(&mut trial_rng(config.seed, t)))
        .collect::<Result<Vec<_>>>()?;

    let mut series: Vec<Series> = ctx
        .methods
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let (mean, stderr) = (0..ctx.axis.len())
                .map(|k| mean_stderr(&values.iter().map(|t| t[k][j]).collect::<Vec<_>>()))
                .unzip();
            Series {
                method: m.clone(),
                mean,
                stderr,
            }
        })
        .collect();
    if kind == ExperimentKind::SinrLossVsN {
        series.extend(ctx.theory_series());
    }
    let report = ExperimentReport {
        experiment: kind.name().to_string(),
        axis: ctx.axis.clone(),
        series,
        trial_count: config.trials,
        seed: config.seed,
        runtime: start.elapsed().as_secs_f64(),
    };
    report.validate()?;
    Ok(DetailedRun {
        report,
        trials: TrialTable {
            methods: ctx.methods.clone(),
            axis: ctx.axis.clone(),
            values,
        },
    })
}

struct SinrSetup {
    reference: SinrReference<f64>,
    d: CVector<f64>,
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    kind: ExperimentKind,
    p: usize,
    q: usize,
    sampler: ClutterSampler,
    axis: Vec<f64>,
    methods: Vec<String>,
    sinr: Option<SinrSetup>,
    bank: Vec<SteeringVector<f64>>,
}

fn method_names() -> Vec<String> {
    FilterKind::ALL.iter().map(|k| k.name().to_string()).collect()
}

/// Random unit vector orthogonal to the columns of `u` (orthonormal).
fn unit_orthogonal(rng: &mut ChaCha8Rng, u: &DMatrix<Complex64>) -> CVector<f64> {
    loop {
        let v = CVector::from_fn(u.nrows(), |_, _| complex_normal(rng));
        let r = &v - u * (u.adjoint() * &v);
        let n = r.norm();
        if n > 1e-8 * v.norm() {
            return r / Complex64::from(n);
        }
    }
}

/// `d = d_A ⊗ d_B` with `d_A ⊥ h` and `d_B` chosen by `steering.temporal`; fixed by the base seed.
fn sinr_steering(cfg: &ExperimentConfig, sc: &ClutterScenario) -> (CVector<f64>, CVector<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(2);
    let h = DMatrix::from_column_slice(sc.p, 1, (&sc.h / Complex64::from(sc.h.norm())).as_slice());
    let d_a = unit_orthogonal(&mut rng, &h);
    let eb = hermitian_eig(&sc.b_true);
    let d_b = match cfg.steering.temporal {
        TemporalSteering::Principal => eb.vectors.column(0).into_owned(),
        TemporalSteering::Orthogonal => unit_orthogonal(&mut rng, &eb.leading(cfg.scenario.rank_b)),
    };
    (d_a, d_b)
}

impl<'a> Context<'a> {
    fn new(cfg: &'a ExperimentConfig, kind: ExperimentKind, sc: ClutterScenario) -> Result<Self> {
        let (p, q) = (sc.p, sc.q);
        let axis: Vec<f64> = match kind {
            ExperimentKind::LrKronConvergence => (0..=cfg.convergence.iterations).map(|i| i as f64).collect(),
            _ => cfg.axis().iter().map(|&n| n as f64).collect(),
        };
        let methods = match kind {
            ExperimentKind::AucVsNCorrupted => method_names()
                .into_iter()
                .flat_map(|m| [m.clone(), format!("{m}/clean"), format!("{m}/drop")])
                .collect(),
            ExperimentKind::LrKronConvergence => vec!["lr-kron/gap".into(), "lr-kron/objective".into()],
            _ => method_names(),
        };
        let sinr = match kind {
            ExperimentKind::SinrLossVsN => {
                let (_, total) = scenario_covariance(&sc);
                let (d_a, d_b) = sinr_steering(cfg, &sc);
                Some(SinrSetup {
                    reference: SinrReference::new(&total)?,
                    d: d_a.kronecker(&d_b),
                })
            }
            _ => None,
        };
        let bank = steering_bank(p, q, &doppler_grid(cfg.test.doppler_bins), cfg.steering.spatial_gain)?;
        Ok(Self {
            cfg,
            kind,
            p,
            q,
            sampler: ClutterSampler::new(&sc),
            axis,
            methods,
            sinr,
            bank,
        })
    }

    fn n_values(&self) -> impl Iterator<Item = usize> + '_ {
        self.axis.iter().map(|&n| n as usize)
    }

    fn trial(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
        match self.kind {
            ExperimentKind::MsResidualVsN => self.n_values().map(|n| self.ms_residual(rng, n)).collect(),
            ExperimentKind::SinrLossVsN => self.n_values().map(|n| self.sinr_loss(rng, n)).collect(),
            ExperimentKind::AucVsN => self.n_values().map(|n| self.auc(rng, n, false)).collect(),
            ExperimentKind::AucVsNCorrupted => self.n_values().map(|n| self.auc(rng, n, true)).collect(),
            ExperimentKind::LrKronConvergence => self.convergence(rng),
        }
    }

    /// Filters in [`FilterKind::ALL`] order.
    fn filters(&self, train: &SampleSet<f64>) -> Result<Vec<StapFilter<f64>>> {
        let s = sample_covariance(train);
        let model = lr_kron(&s, self.p, self.q, self.cfg.estimator.r_a, self.cfg.r_b(), &self.cfg.lrkron_options())?;
        FilterKind::ALL
            .iter()
            .map(|k| match k {
                FilterKind::KronStap => kron_stap_filter(&model),
                FilterKind::SpatialOnly => spatial_only_filter(&model),
                FilterKind::KronClassical => kron_classical_filter(&model),
                FilterKind::LowRank => lr_stap_filter_from_samples(train, self.cfg.lr_rank()),
            })
            .collect()
    }

    fn ms_residual(&self, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<f64>> {
        let train = self.sampler.draw(rng, n);
        let test = self.sampler.draw(rng, self.cfg.test.size);
        self.filters(&train)?
            .iter()
            .map(|f| crate::metrics::ms_residual(f, &test))
            .collect()
    }

    /// SpatialOnly here uses the pulse-averaged naive spatial estimate.
    fn sinr_loss(&self, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<f64>> {
        let setup = self.sinr.as_ref().expect("sinr setup");
        let train = self.sampler.draw(rng, n);
        let mut filters = self.filters(&train)?;
        let naive = naive_spatial_estimate(&sample_covariance(&train), self.p, self.q)?;
        let h = DMatrix::from_column_slice(self.p, 1, naive.h_hat.as_slice());
        filters[1] = StapFilter::from_bases(FilterKind::SpatialOnly, self.p, self.q, Some(h), None, None)?;
        filters
            .iter()
            .map(|f| setup.reference.loss(f, &setup.d).map(|l| l.value))
            .collect()
    }

    fn theory_series(&self) -> Vec<Series> {
        let zeros = vec![0.0; self.axis.len()];
        let curve = |c: TheoryCurve, r: usize| {
            self.axis
                .iter()
                .map(|&n| {
                    theory_sinr_loss(
                        c,
                        &TheoryParams {
                            r,
                            n: n as usize,
                            ..Default::default()
                        },
                    )
                })
                .collect()
        };
        vec![
            Series {
                method: format!("theory/{}", FilterKind::LowRank.name()),
                mean: curve(TheoryCurve::LowRank, self.cfg.lr_rank()),
                stderr: zeros.clone(),
            },
            Series {
                method: format!("theory/{}", FilterKind::SpatialOnly.name()),
                mean: curve(TheoryCurve::KronSpatial, 0),
                stderr: zeros,
            },
        ]
    }

    /// H1 target: Doppler uniform with `|f| ≥ guard_band`, amplitude log-uniform around the configured centre.
    fn test_target(&self, rng: &mut ChaCha8Rng) -> CVector<f64> {
        let t = &self.cfg.test;
        let mag = rng.random::<f64>() * (0.5 - t.guard_band) + t.guard_band;
        let doppler = if rng.random::<bool>() { mag } else { -mag };
        let amp = t.amplitude * 10f64.powf(t.amplitude_decades * (2.0 * rng.random::<f64>() - 1.0));
        let phase = rng.random::<f64>() * std::f64::consts::TAU;
        target_return(
            &TargetSpec {
                doppler,
                amplitude: Complex64::from_polar(amp, phase),
                spatial_gain: self.cfg.steering.spatial_gain,
            },
            self.p,
            self.q,
        )
    }

    fn scores(&self, f: &StapFilter<f64>, xs: &DMatrix<Complex64>) -> Result<Vec<f64>> {
        let stats = detection_statistics(f, xs, &self.bank)?;
        Ok(stats.row_iter().map(|r| r.max()).collect())
    }

    fn auc(&self, rng: &mut ChaCha8Rng, n: usize, corrupted: bool) -> Result<Vec<f64>> {
        let m = self.cfg.test.size;
        let train = self.sampler.draw(rng, n);
        let dirty = if corrupted {
            Some(corrupt_training_with(&train, &self.cfg.corruption, rng)?)
        } else {
            None
        };
        let h0 = self.sampler.draw_matrix(rng, m);
        let mut h1 = self.sampler.draw_matrix(rng, m);
        for mut col in h1.column_iter_mut() {
            col += self.test_target(rng);
        }
        let auc_of = |filters: &[StapFilter<f64>]| -> Result<Vec<f64>> {
            filters
                .iter()
                .map(|f| roc_auc(&self.scores(f, &h0)?, &self.scores(f, &h1)?))
                .collect()
        };
        let clean = auc_of(&self.filters(&train)?)?;
        let Some(dirty) = dirty else {
            return Ok(clean);
        };
        let corrupt = auc_of(&self.filters(&dirty)?)?;
        Ok(clean
            .iter()
            .zip(&corrupt)
            .flat_map(|(c, d)| [*d, *c, c - d])
            .collect())
    }

    /// Objective gap `F_i − F_∞` per iteration, `F_∞` from a long run of the same fit.
    fn convergence(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
        const REFERENCE_ITERS: usize = 200;
        let train = self.sampler.draw(rng, self.cfg.convergence.n);
        let s = sample_covariance(&train);
        let opts = LrKronOptions {
            tol: f64::MIN_POSITIVE,
            max_iter: REFERENCE_ITERS.max(self.cfg.convergence.iterations),
        };
        let model = lr_kron(&s, self.p, self.q, self.cfg.estimator.r_a, self.cfg.r_b(), &opts)?;
        let trace = &model.objective_trace;
        let f_inf = *trace.last().ok_or_else(|| Error::Degenerate("empty objective trace".into()))?;
        Ok((0..=self.cfg.convergence.iterations)
            .map(|i| {
                let f = trace[i.min(trace.len() - 1)];
                vec![(f - f_inf).max(0.0), f]
            })
            .collect())
    }
}
