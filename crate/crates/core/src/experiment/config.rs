use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimation::LrKronOptions;
use crate::sim::{ClutterScenario, CorruptionSpec, ScenarioParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    MsResidualVsN,
    SinrLossVsN,
    AucVsN,
    AucVsNCorrupted,
    LrKronConvergence,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::MsResidualVsN,
        ExperimentKind::SinrLossVsN,
        ExperimentKind::AucVsN,
        ExperimentKind::AucVsNCorrupted,
        ExperimentKind::LrKronConvergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MsResidualVsN => "ms-residual-vs-n",
            ExperimentKind::SinrLossVsN => "sinr-loss-vs-n",
            ExperimentKind::AucVsN => "auc-vs-n",
            ExperimentKind::AucVsNCorrupted => "auc-vs-n-corrupted",
            ExperimentKind::LrKronConvergence => "lrkron-convergence",
        }
    }

    fn default_axis(self) -> Vec<usize> {
        match self {
            ExperimentKind::MsResidualVsN => vec![1, 2, 5, 10, 20, 50, 100, 200],
            ExperimentKind::SinrLossVsN => vec![20, 40, 80],
            ExperimentKind::AucVsN | ExperimentKind::AucVsNCorrupted => vec![5, 10, 20, 40, 80],
            ExperimentKind::LrKronConvergence => Vec::new(),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
            format!("unknown experiment `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// Temporal part `d_B` of the steering vector used for SINR loss.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporalSteering {
    /// Principal eigenvector of the true B.
    Principal,
    /// Random unit vector orthogonal to range(B).
    Orthogonal,
}

impl FromStr for TemporalSteering {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "principal" => Ok(Self::Principal),
            "orthogonal" => Ok(Self::Orthogonal),
            _ => Err(format!("expected `principal` or `orthogonal`, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub r_a: usize,
    /// Defaults to `scenario.rank_b`.
    pub r_b: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestConfig {
    /// Samples per hypothesis (H0 and H1 each), and the MS-residual test-set size.
    pub size: usize,
    /// Centre of the log-uniform H1 amplitude distribution.
    pub amplitude: f64,
    pub amplitude_decades: f64,
    /// Targets are drawn with `|f| ≥ guard_band`.
    pub guard_band: f64,
    pub doppler_bins: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteeringConfig {
    pub spatial_gain: f64,
    pub temporal: TemporalSteering,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceConfig {
    pub n: usize,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulateConfig {
    pub n: usize,
    pub target_doppler: Option<f64>,
    pub target_amplitude: f64,
    pub target_bins: Vec<usize>,
}

/// Everything an experiment or `simulate` run needs; parsed from flat `key = value` text.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentKind>,
    pub seed: u64,
    pub trials: usize,
    pub output: Option<PathBuf>,
    /// Training sizes; empty means the experiment's default grid.
    pub axis_n: Vec<usize>,
    pub scenario: ScenarioParams,
    pub estimator: EstimatorConfig,
    /// LR-STAP rank; defaults to `r_a·r_b`.
    pub lr_rank: Option<usize>,
    pub test: TestConfig,
    pub corruption: CorruptionSpec,
    pub steering: SteeringConfig,
    pub convergence: ConvergenceConfig,
    pub simulate: SimulateConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            seed: 1,
            trials: 100,
            output: None,
            axis_n: Vec::new(),
            scenario: ScenarioParams::default(),
            estimator: EstimatorConfig {
                r_a: 1,
                r_b: None,
                tol: LrKronOptions::default().tol,
                max_iter: LrKronOptions::default().max_iter,
            },
            lr_rank: None,
            test: TestConfig {
                size: 100,
                amplitude: 0.15,
                amplitude_decades: 1.0,
                guard_band: 0.05,
                doppler_bins: 150,
            },
            corruption: CorruptionSpec {
                fraction: 0.05,
                amp_min: 5.0,
                amp_max: 20.0,
                spatial_gain: 1.0,
            },
            steering: SteeringConfig {
                spatial_gain: 1.0,
                temporal: TemporalSteering::Principal,
            },
            convergence: ConvergenceConfig { n: 50, iterations: 10 },
            simulate: SimulateConfig {
                n: 100,
                target_doppler: None,
                target_amplitude: 1.0,
                target_bins: Vec::new(),
            },
        }
    }
}

pub const CONFIG_KEYS: &[&str] = &[
    "experiment",
    "seed",
    "trials",
    "output",
    "axis.n",
    "scenario.p",
    "scenario.q",
    "scenario.rank_b",
    "scenario.b_decades",
    "scenario.noise_ratio",
    "scenario.texture_dof",
    "scenario.secondary_ratio",
    "scenario.gain_sd",
    "scenario.phase_sd",
    "estimator.r_a",
    "estimator.r_b",
    "estimator.tol",
    "estimator.max_iter",
    "comparison.lr_rank",
    "test.size",
    "test.amplitude",
    "test.amplitude_decades",
    "test.guard_band",
    "test.doppler_bins",
    "corruption.fraction",
    "corruption.amp_min",
    "corruption.amp_max",
    "steering.spatial_gain",
    "steering.temporal",
    "convergence.n",
    "convergence.iterations",
    "simulate.n",
    "simulate.target_doppler",
    "simulate.target_amplitude",
    "simulate.target_bins",
];

fn parse_value<V: FromStr>(line: usize, key: &str, raw: &str) -> Result<V>
where
    V::Err: fmt::Display,
{
    raw.parse().map_err(|e| Error::ConfigLine {
        line,
        message: format!("`{key}`: cannot parse `{raw}`: {e}"),
    })
}

fn parse_f64(line: usize, key: &str, raw: &str) -> Result<f64> {
    let v = match raw {
        "inf" | "infinity" => f64::INFINITY,
        _ => parse_value::<f64>(line, key, raw)?,
    };
    if v.is_nan() {
        return Err(Error::ConfigLine {
            line,
            message: format!("`{key}` is NaN"),
        });
    }
    Ok(v)
}

fn parse_list(line: usize, key: &str, raw: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(line, key, s))
        .collect()
}

impl ExperimentConfig {
    /// Grammar: one `key = value` per line; `#` starts a comment; blank lines ignored.
    /// Keys are dotted (`scenario.q`); unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(Error::ConfigLine {
                    line,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let (k, v) = (k.trim(), v.trim());
            if !CONFIG_KEYS.contains(&k) {
                return Err(Error::ConfigLine {
                    line,
                    message: format!("unknown key `{k}`"),
                });
            }
            if v.is_empty() {
                return Err(Error::ConfigLine {
                    line,
                    message: format!("`{k}` has no value"),
                });
            }
            if let Some((first, _)) = entries.get(k) {
                return Err(Error::ConfigLine {
                    line,
                    message: format!("`{k}` repeats line {first}"),
                });
            }
            entries.insert(k.to_string(), (line, v.to_string()));
        }

        let mut c = Self::default();
        for (key, (line, raw)) in &entries {
            let (line, raw, key) = (*line, raw.as_str(), key.as_str());
            let int = || parse_value::<usize>(line, key, raw);
            let real = || parse_f64(line, key, raw);
            match key {
                "experiment" => c.experiment = Some(parse_value(line, key, raw)?),
                "seed" => c.seed = parse_value(line, key, raw)?,
                "trials" => c.trials = int()?,
                "output" => c.output = Some(PathBuf::from(raw)),
                "axis.n" => c.axis_n = parse_list(line, key, raw)?,
                "scenario.p" => c.scenario.p = int()?,
                "scenario.q" => c.scenario.q = int()?,
                "scenario.rank_b" => c.scenario.rank_b = int()?,
                "scenario.b_decades" => c.scenario.b_decades = real()?,
                "scenario.noise_ratio" => c.scenario.noise_ratio = real()?,
                "scenario.texture_dof" => c.scenario.texture_dof = real()?,
                "scenario.secondary_ratio" => {
                    c.scenario.secondary_ratio = if raw == "none" { None } else { Some(real()?) }
                }
                "scenario.gain_sd" => c.scenario.calibration_gain_sd = real()?,
                "scenario.phase_sd" => c.scenario.calibration_phase_sd = real()?,
                "estimator.r_a" => c.estimator.r_a = int()?,
                "estimator.r_b" => c.estimator.r_b = Some(int()?),
                "estimator.tol" => c.estimator.tol = real()?,
                "estimator.max_iter" => c.estimator.max_iter = int()?,
                "comparison.lr_rank" => c.lr_rank = Some(int()?),
                "test.size" => c.test.size = int()?,
                "test.amplitude" => c.test.amplitude = real()?,
                "test.amplitude_decades" => c.test.amplitude_decades = real()?,
                "test.guard_band" => c.test.guard_band = real()?,
                "test.doppler_bins" => c.test.doppler_bins = int()?,
                "corruption.fraction" => c.corruption.fraction = real()?,
                "corruption.amp_min" => c.corruption.amp_min = real()?,
                "corruption.amp_max" => c.corruption.amp_max = real()?,
                "steering.spatial_gain" => c.steering.spatial_gain = real()?,
                "steering.temporal" => c.steering.temporal = parse_value(line, key, raw)?,
                "convergence.n" => c.convergence.n = int()?,
                "convergence.iterations" => c.convergence.iterations = int()?,
                "simulate.n" => c.simulate.n = int()?,
                "simulate.target_doppler" => c.simulate.target_doppler = Some(real()?),
                "simulate.target_amplitude" => c.simulate.target_amplitude = real()?,
                "simulate.target_bins" => c.simulate.target_bins = parse_list(line, key, raw)?,
                _ => unreachable!("key list and match arms disagree on `{key}`"),
            }
        }
        c.corruption.spatial_gain = c.steering.spatial_gain;
        c.scenario.seed = c.seed;
        Ok(c)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Replaces the base seed (trials and scenario).
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.scenario.seed = seed;
        self
    }

    pub fn require_experiment(&self) -> Result<ExperimentKind> {
        self.experiment
            .ok_or_else(|| Error::Config("missing required key `experiment`".into()))
    }

    pub fn r_b(&self) -> usize {
        self.estimator.r_b.unwrap_or(self.scenario.rank_b)
    }

    pub fn lr_rank(&self) -> usize {
        self.lr_rank.unwrap_or(self.estimator.r_a * self.r_b())
    }

    pub fn lrkron_options(&self) -> LrKronOptions {
        LrKronOptions {
            tol: self.estimator.tol,
            max_iter: self.estimator.max_iter,
        }
    }

    pub fn axis(&self) -> Vec<usize> {
        match (self.axis_n.is_empty(), self.experiment) {
            (false, _) => self.axis_n.clone(),
            (true, Some(k)) => k.default_axis(),
            (true, None) => Vec::new(),
        }
    }

    /// Checks every field against its owning module and builds the scenario.
    pub fn validate(&self) -> Result<ClutterScenario> {
        let bad = |m: String| Err(Error::Config(m));
        let (p, q) = (self.scenario.p, self.scenario.q);
        let sc = ClutterScenario::generate(&self.scenario)?;
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.estimator.r_a == 0 || self.estimator.r_a > p {
            return bad(format!("estimator.r_a must lie in 1..={p}"));
        }
        if self.r_b() == 0 || self.r_b() > q {
            return bad(format!("estimator.r_b must lie in 1..={q}"));
        }
        if !(self.estimator.tol >= 0.0) || self.estimator.max_iter == 0 {
            return bad("estimator.tol must be ≥ 0 and estimator.max_iter ≥ 1".into());
        }
        if self.lr_rank() > p * q {
            return bad(format!("comparison.lr_rank must not exceed {}", p * q));
        }
        if self.axis_n.contains(&0) {
            return bad("axis.n entries must be positive".into());
        }
        let t = &self.test;
        if t.size == 0 || t.doppler_bins == 0 {
            return bad("test.size and test.doppler_bins must be positive".into());
        }
        if !(t.amplitude > 0.0 && t.amplitude.is_finite() && t.amplitude_decades >= 0.0) {
            return bad("test.amplitude must be positive and test.amplitude_decades non-negative".into());
        }
        if !(0.0..0.5).contains(&t.guard_band) {
            return bad("test.guard_band must lie in [0, 0.5)".into());
        }
        let cr = &self.corruption;
        if !(0.0..=1.0).contains(&cr.fraction) || !(cr.amp_min >= 0.0 && cr.amp_min <= cr.amp_max && cr.amp_max.is_finite()) {
            return bad("corruption.fraction must lie in [0, 1] and 0 ≤ amp_min ≤ amp_max".into());
        }
        if !self.steering.spatial_gain.is_finite() {
            return bad("steering.spatial_gain must be finite".into());
        }
        if self.convergence.n == 0 || self.convergence.iterations == 0 {
            return bad("convergence.n and convergence.iterations must be positive".into());
        }
        if self.simulate.n == 0 {
            return bad("simulate.n must be at least 1".into());
        }
        if let Some(&b) = self.simulate.target_bins.iter().find(|&&b| b >= self.simulate.n) {
            return bad(format!("simulate.target_bins entry {b} is not below simulate.n"));
        }
        if !self.simulate.target_bins.is_empty() && self.simulate.target_doppler.is_none() {
            return bad("simulate.target_bins needs simulate.target_doppler".into());
        }
        Ok(sc)
    }
}
