//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 insufficient
//! resolution, 4 trend failure, 5 I/O or malformed input.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use vortex_filaments::config::ExperimentConfig;
use vortex_filaments::domain::{build_grid, r_star, DomainSpec};
use vortex_filaments::expansion::{gamma_sweep, h_eps, SweepOptions};
use vortex_filaments::fields::{energy_2d, trial_slice, RadialMode};
use vortex_filaments::io;
use vortex_filaments::reduced::{
    el_residual, g0_parts, minimize_g0, regularize_fdelta, straight_initial_guess, Convention,
    EndpointConstraint, FilamentConfiguration,
};
use vortex_filaments::renormalized::{gamma_constant, h_origin, kappa_n, GreenMode};
use vortex_filaments::vortex::{ball_construction, covered_energy, detect_vortices, BallCollection};
use vortex_filaments::{Error, Point2, Result};

const EXIT_TREND: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "vortex-filaments", version, about = "Nearly parallel vortex filament experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Random seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimize the reduced energy for the configured endpoints.
    Minimize,
    /// Sweep ε over recovery fields of the minimizer (or of the configured filament file).
    GammaSweep,
    /// Core constant γ, H_ω(0,0) and κ_n.
    Constants,
    /// Write a trial field with vortices at the given points.
    Plant(PlantArgs),
    /// Detect vortices and build vortex balls on stored field slices.
    Detect(DetectArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Profile {
    CoreMin,
    Zeta,
}

#[derive(Args, Debug)]
struct PlantArgs {
    /// Vortex position `x,y`; repeat for several vortices.
    #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true)]
    points: Vec<Point2>,
    #[arg(long)]
    epsilon: f64,
    /// Grid spacing (default ε/4).
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long, value_enum, default_value = "core-min")]
    profile: Profile,
}

#[derive(Args, Debug)]
struct DetectArgs {
    /// Field manifest written by `plant` or another exporter.
    #[arg(long)]
    field: PathBuf,
    /// Total radius the vortex balls grow to.
    #[arg(long)]
    target_radius: f64,
}

fn parse_point(s: &str) -> std::result::Result<Point2, String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let x = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(Point2::new(x, y))
}

enum Outcome {
    Done,
    Trend(String),
}

fn load_config(g: &Global) -> Result<ExperimentConfig> {
    let mut c = match &g.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::new(DomainSpec::disk(1.0)),
    };
    if let Some(o) = &g.out {
        c.output_dir = o.clone();
    }
    if let Some(s) = g.seed {
        c.seed = s;
    }
    Ok(c)
}

fn endpoints(c: &ExperimentConfig) -> Result<EndpointConstraint> {
    c.endpoints
        .clone()
        .ok_or_else(|| Error::Config("the config has no endpoints".into()))
}

#[derive(Serialize)]
struct MinimizeOutput {
    #[serde(rename = "G0")]
    g0: Option<f64>,
    /// Energy without the endpoint terms.
    g0_free: f64,
    kinetic: f64,
    grad_norm: f64,
    iterations: usize,
    /// Largest interior Euler-Lagrange residual (gradient-consistent convention).
    el_residual: f64,
    /// Whether the initial guess had to be regularized.
    regularized: bool,
    seed: u64,
}

/// Straight initial guess, regularized when it collides.
fn initial_guess(c: &ExperimentConfig, ends: &EndpointConstraint) -> Result<(FilamentConfiguration, bool)> {
    let f0 = straight_initial_guess(ends, c.height, c.segments)?;
    if f0.find_interior_collision().is_none() {
        return Ok((f0, false));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    Ok((regularize_fdelta(&f0, c.regularization_delta, &mut rng)?.config, true))
}

fn minimize(c: &ExperimentConfig) -> Result<FilamentConfiguration> {
    let ends = endpoints(c)?;
    let (f0, regularized) = initial_guess(c, &ends)?;
    let out = &c.output_dir;
    let (f, report) = match minimize_g0(&f0, &ends, &c.minimizer) {
        Ok(v) => v,
        Err(Error::MinimizerNotConverged {
            iterations,
            grad_norm,
            last,
        }) => {
            io::save_filaments(&out.join("minimizer_last.csv"), &last)?;
            io::save_json(
                &out.join("minimize_diagnostics.json"),
                &serde_json::json!({
                    "iterations": iterations,
                    "grad_norm": grad_norm,
                    "tolerance": c.minimizer.tolerance,
                    "G0_free": g0_parts(&last).free(),
                }),
            )?;
            return Err(Error::MinimizerNotConverged {
                iterations,
                grad_norm,
                last,
            });
        }
        Err(e) => return Err(e),
    };
    let parts = g0_parts(&f);
    let residual = el_residual(&f, Convention::GradientConsistent)?
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max);
    io::save_filaments(&out.join("minimizer.csv"), &f)?;
    io::save_json(
        &out.join("energy.json"),
        &MinimizeOutput {
            g0: parts.total().is_finite().then_some(parts.total()),
            g0_free: parts.free(),
            kinetic: parts.kinetic,
            grad_norm: report.grad_norm,
            iterations: report.iterations,
            el_residual: residual,
            regularized,
            seed: c.seed,
        },
    )?;
    Ok(f)
}

fn cmd_gamma_sweep(c: &ExperimentConfig) -> Result<Outcome> {
    let f = match &c.filaments {
        Some(p) => io::load_filaments(p)?,
        None => minimize(c)?,
    };
    let opts = SweepOptions {
        domain: c.domain,
        policy: c.grid,
        phase: c.phase,
        gamma: None,
    };
    let report = gamma_sweep(&f, &c.epsilons, &opts)?;
    io::save_json(&c.output_dir.join("expansion.json"), &report)?;
    io::save_with(&c.output_dir.join("expansion.csv"), |w| report.write_csv(w))?;
    if let Some(r) = report.records.iter().find(|r| r.failure_code == Some(3)) {
        return Err(Error::Resolution(format!(
            "ε = {}: {}",
            r.epsilon,
            r.failure.as_deref().unwrap_or("")
        )));
    }
    if let Some(r) = report.records.iter().find(|r| r.result.is_none()) {
        return Err(Error::Config(format!(
            "ε = {}: {}",
            r.epsilon,
            r.failure.as_deref().unwrap_or("")
        )));
    }
    if !report.abs_gap_decreasing {
        return Ok(Outcome::Trend("|G_ε − G₀(f)| does not decrease across the ε list".into()));
    }
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct ConstantsOutput {
    gamma_estimate: f64,
    observed_order: f64,
    gamma_trace: serde_json::Value,
    gamma_warning: Option<String>,
    #[serde(rename = "H00")]
    h00: f64,
    n: usize,
    height: f64,
    kappa_n: f64,
}

fn cmd_constants(c: &ExperimentConfig) -> Result<Outcome> {
    let n = c.filament_count()?;
    let g = gamma_constant(&c.gamma_epsilons, &c.radial)?;
    let grid = build_grid(&c.domain, c.domain.min_extent() / 256.0)?;
    let mode = match c.domain {
        DomainSpec::Disk { .. } => GreenMode::DiskClosedForm,
        DomainSpec::Rectangle { .. } => GreenMode::Numeric {
            grid: &grid,
            options: c.laplace,
        },
    };
    // Adding zero turns a negative zero into +0 for the JSON output.
    let h00 = h_origin(&c.domain, mode)? + 0.0;
    io::save_json(
        &c.output_dir.join("constants.json"),
        &ConstantsOutput {
            gamma_estimate: g.gamma,
            observed_order: g.observed_order,
            gamma_trace: serde_json::to_value(&g.steps)?,
            gamma_warning: g.warning.clone(),
            h00,
            n,
            height: c.height,
            kappa_n: kappa_n(h00, n, c.height, g.gamma),
        },
    )?;
    Ok(Outcome::Done)
}

fn cmd_plant(c: &ExperimentConfig, a: &PlantArgs) -> Result<Outcome> {
    let spacing = a.spacing.unwrap_or(a.epsilon / 4.0);
    let grid = Arc::new(build_grid(&c.domain, spacing)?);
    let mode = match a.profile {
        Profile::CoreMin => RadialMode::CoreMin,
        Profile::Zeta => RadialMode::Zeta,
    };
    let w = trial_slice(&grid, &a.points, a.epsilon, mode, c.phase)?;
    let h = (a.epsilon < 1.0).then(|| h_eps(a.epsilon)).transpose()?;
    io::save_field_slices(&c.output_dir, &[w], h, None)?;
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct DetectOutput<'a> {
    #[serde(flatten)]
    balls: &'a BallCollection,
    /// `∫ e_ε` over the union of the balls.
    measured_energy: f64,
    total_energy: f64,
    r_star: f64,
}

fn cmd_detect(c: &ExperimentConfig, a: &DetectArgs) -> Result<Outcome> {
    let (_, fields) = io::load_field_slices(&a.field)?;
    for (k, w) in fields.iter().enumerate() {
        let mu = detect_vortices(w);
        io::save_measure(&c.output_dir.join(format!("vortices_{k:04}.csv")), &mu)?;
        let balls = ball_construction(w, a.target_radius)?;
        io::save_json(
            &c.output_dir.join(format!("balls_{k:04}.json")),
            &DetectOutput {
                measured_energy: covered_energy(w, &balls),
                total_energy: energy_2d(w),
                r_star: r_star(w.grid().domain()),
                balls: &balls,
            },
        )?;
    }
    Ok(Outcome::Done)
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(t) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let c = load_config(&cli.global)?;
    match &cli.command {
        Command::Minimize => minimize(&c).map(|_| Outcome::Done),
        Command::GammaSweep => cmd_gamma_sweep(&c),
        Command::Constants => cmd_constants(&c),
        Command::Plant(a) => cmd_plant(&c, a),
        Command::Detect(a) => cmd_detect(&c, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Trend(msg)) => {
            eprintln!("trend check failed: {msg}");
            ExitCode::from(EXIT_TREND)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
