use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use kstap::estimation::{lr_kron, sample_covariance, KronCovModel, LrKronOptions};
use kstap::experiment::{fmt_g, preset, run_experiment, ExperimentConfig};
use kstap::filters::{
    detection_statistics, doppler_grid, kron_classical_filter, kron_stap_filter, lr_stap_filter, spatial_only_filter,
    steering_bank, FilterKind, StapFilter,
};
use kstap::io::{read_model, read_phase_history, read_phase_history_header, write_atomic, write_model, write_phase_history};
use kstap::linalg::hermitian_eig;
use kstap::sim::{sample_clutter, target_return, TargetSpec};
use kstap::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "kstap", version, about = "Kronecker STAP: simulate, estimate, filter and benchmark")]
struct Cli {
    /// Base seed; overrides any seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path; overrides any `output` key in the config.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Suppress summaries and warnings.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate range bins from a scenario config and write a KPHD file.
    Simulate(ConfigSource),
    /// Fit LR-Kron to the sample covariance of a KPHD file and write a KCOV model.
    Estimate(EstimateArgs),
    /// Filter every range bin and write its detection statistics over a Doppler bank as CSV.
    Filter(FilterArgs),
    /// Run a Monte Carlo experiment and write its report CSV.
    Experiment(ConfigSource),
}

#[derive(Args, Debug)]
struct ConfigSource {
    /// Config file (`key = value` lines).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Bundled config by name (e.g. fig2_desk, full-scale).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// KPHD training data.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    r_a: usize,
    #[arg(long)]
    r_b: usize,
    #[arg(long, default_value_t = LrKronOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = LrKronOptions::default().max_iter)]
    max_iter: usize,
}

#[derive(Args, Debug)]
struct FilterArgs {
    /// KPHD data to filter.
    #[arg(long, short)]
    input: PathBuf,
    /// KCOV model (required for the Kronecker kinds).
    #[arg(long, short)]
    model: Option<PathBuf>,
    /// kron-stap, spatial-only, kron-classical or lr-stap.
    #[arg(long, default_value = "kron-stap")]
    kind: String,
    /// LR-STAP rank when `--kind lr-stap` (estimated from the input itself).
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 150)]
    doppler_bins: usize,
    #[arg(long, default_value_t = 1.0)]
    spatial_gain: f64,
}

fn load_config(src: &ConfigSource, seed: Option<u64>) -> Result<ExperimentConfig> {
    let c = match (&src.config, &src.preset) {
        (Some(path), _) => ExperimentConfig::from_file(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => return Err(Error::Config("give a config file or --preset".into())),
    };
    Ok(match seed {
        Some(s) => c.with_seed(s),
        None => c,
    })
}

fn require_output(cli_out: &Option<PathBuf>, cfg_out: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
    cli_out
        .clone()
        .or_else(|| cfg_out.clone())
        .ok_or_else(|| Error::Config(format!("{what} needs an output path (--output or `output` key)")))
}

fn spectrum(m: &kstap::linalg::HermitianMatrix<f64>, k: usize) -> String {
    let e = hermitian_eig(m);
    let vals: Vec<String> = e.values.iter().take(k).map(|v| format!("{v:.4e}")).collect();
    vals.join(" ")
}

fn simulate(cli: &Cli, src: &ConfigSource) -> Result<()> {
    let cfg = load_config(src, cli.seed)?;
    let sc = cfg.validate()?;
    let out = require_output(&cli.output, &cfg.output, "simulate")?;
    let mut data = sample_clutter(&sc, cfg.simulate.n)?;
    if let Some(doppler) = cfg.simulate.target_doppler {
        let t = target_return(
            &TargetSpec {
                doppler,
                amplitude: Complex64::from(cfg.simulate.target_amplitude),
                spatial_gain: cfg.steering.spatial_gain,
            },
            sc.p,
            sc.q,
        );
        for &b in &cfg.simulate.target_bins {
            let mut col = data.as_matrix_mut().column_mut(b);
            col += &t;
        }
    }
    write_phase_history(&out, &data)?;
    if !cli.quiet {
        println!(
            "simulated {} range bins: p = {}, q = {}, rank(B) = {}, rank(A) = {}, sigma2 = {:.4e}, texture dof = {}",
            data.len(),
            sc.p,
            sc.q,
            cfg.scenario.rank_b,
            sc.rank_a(),
            sc.sigma2,
            sc.texture_dof
        );
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn estimate(cli: &Cli, args: &EstimateArgs) -> Result<()> {
    let out = require_output(&cli.output, &None, "estimate")?;
    let header = read_phase_history_header(&args.input)?;
    if args.r_a == 0 || args.r_a > header.p {
        return Err(Error::Config(format!("--r-a must lie in 1..={} for this file", header.p)));
    }
    if args.r_b == 0 || args.r_b > header.q {
        return Err(Error::Config(format!("--r-b must lie in 1..={} for this file", header.q)));
    }
    let data = read_phase_history(&args.input)?;
    let s = sample_covariance(&data);
    let opts = LrKronOptions {
        tol: args.tol,
        max_iter: args.max_iter,
    };
    let model = lr_kron(&s, header.p, header.q, args.r_a, args.r_b, &opts)?;
    write_model(&out, &model)?;
    if !cli.quiet {
        println!(
            "lr-kron: {} iterations, converged = {}, final objective = {:.6e}, noise floor = {:.4e}",
            model.iterations,
            model.converged,
            model.final_objective().unwrap_or(f64::NAN),
            model.noise_floor
        );
        println!("spectrum(A): {}", spectrum(model.a_factor(), header.p));
        println!("spectrum(B): {}", spectrum(model.b_factor(), args.r_b + 2));
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn build_filter(kind: FilterKind, model: Option<&KronCovModel<f64>>, args: &FilterArgs, data: &kstap::estimation::SampleSet<f64>) -> Result<StapFilter<f64>> {
    let need = || model.ok_or_else(|| Error::Config(format!("--kind {kind} needs --model")));
    match kind {
        FilterKind::KronStap => kron_stap_filter(need()?),
        FilterKind::SpatialOnly => spatial_only_filter(need()?),
        FilterKind::KronClassical => kron_classical_filter(need()?),
        FilterKind::LowRank => {
            let r = args
                .rank
                .or_else(|| model.map(|m| m.r_a() * m.r_b()))
                .ok_or_else(|| Error::Config("--kind lr-stap needs --rank or --model".into()))?;
            lr_stap_filter(&sample_covariance(data), data.p(), data.q(), r)
        }
    }
}

fn filter(cli: &Cli, args: &FilterArgs) -> Result<()> {
    let kind = FilterKind::parse(&args.kind).ok_or_else(|| {
        let names: Vec<_> = FilterKind::ALL.iter().map(|k| k.name()).collect();
        Error::Config(format!("unknown filter kind `{}` (expected one of {})", args.kind, names.join(", ")))
    })?;
    if args.doppler_bins == 0 {
        return Err(Error::Config("--doppler-bins must be positive".into()));
    }
    let header = read_phase_history_header(&args.input)?;
    let model = args.model.as_deref().map(read_model).transpose()?;
    if let Some(m) = &model {
        if (m.p(), m.q()) != (header.p, header.q) {
            return Err(Error::Config(format!(
                "model is {}x{} but data is p = {}, q = {}",
                m.p(),
                m.q(),
                header.p,
                header.q
            )));
        }
    }
    let data = read_phase_history(&args.input)?;
    let f = build_filter(kind, model.as_ref(), args, &data)?;
    if !cli.quiet {
        for w in f.warnings() {
            eprintln!("warning: {w}");
        }
    }
    let bank = steering_bank(data.p(), data.q(), &doppler_grid(args.doppler_bins), args.spatial_gain)?;
    let stats = detection_statistics(&f, data.as_matrix(), &bank)?;
    let mut csv = String::new();
    for row in stats.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| fmt_g(*v)).collect();
        let _ = writeln!(csv, "{}", cells.join(","));
    }
    write_text(cli.output.as_deref(), &csv)?;
    if !cli.quiet {
        if let Some(out) = &cli.output {
            eprintln!("{kind}: {} range bins x {} Doppler bins -> {}", stats.nrows(), stats.ncols(), out.display());
        }
    }
    Ok(())
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn experiment(cli: &Cli, src: &ConfigSource) -> Result<()> {
    let cfg = load_config(src, cli.seed)?;
    let kind = cfg.require_experiment()?;
    cfg.validate()?;
    let out = cli.output.clone().or_else(|| cfg.output.clone());
    let report = run_experiment(&cfg)?;
    write_text(out.as_deref(), &report.to_csv())?;
    if !cli.quiet {
        eprintln!(
            "{kind}: {} trials, {} axis points, seed {}, {:.1} s",
            report.trial_count,
            report.axis.len(),
            report.seed,
            report.runtime
        );
        if let Some(o) = out {
            eprintln!("wrote {}", o.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { log::LevelFilter::Error } else { log::LevelFilter::Warn };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("KSTAP_LOG")
        .init();
    let res = match &cli.command {
        Command::Simulate(src) => simulate(&cli, src),
        Command::Estimate(args) => estimate(&cli, args),
        Command::Filter(args) => filter(&cli, args),
        Command::Experiment(src) => experiment(&cli, src),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
