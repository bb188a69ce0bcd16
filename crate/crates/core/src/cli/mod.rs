//! Command-line front end: `run`, `sweep` and `verify`.
//!
//! Exit codes: 0 success, 1 failed verification, 2 configuration error,
//! 3 numerical failure, 4 I/O failure.

pub mod config;
pub mod output;
pub mod presets;
pub mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::error::ProtocolError;
use crate::protocols::{argmax_by, sweep, Scenario, SweepAxis, SweepGrid};

use self::config::ConfigFile;
use self::output::{render_csv, summary_path, write_atomic, write_summary, RunManifest, Series, Summary};
use self::presets::PresetSeries;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) => 2,
            CliError::Protocol(e) if e.is_config_error() => 2,
            CliError::Protocol(_) | CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "colltherm", version, about = "Joint bath thermometry with a collisional model")]
pub struct Cli {
    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, global = true, env = "COLLTHERM_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a preset (fig2..fig5) or a configuration file; writes CSV plus a JSON summary.
    Run {
        /// Preset name, or with --config an override of the scenario kind
        /// (single, uncorrelated, correlated, qutrit).
        #[arg(long)]
        scenario: Option<String>,
        /// TOML configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV path; the summary goes next to it with a .json extension.
        #[arg(long)]
        out: PathBuf,
        /// Recorded in the run manifest.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep one axis of a base configuration.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// g1, g2, g3 (gτ/π), theta (θ/π), gamma_t, t1, t2, t3, n_ancillas
        #[arg(long)]
        axis: String,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long)]
        step: f64,
        /// single, uncorrelated, correlated or qutrit (default: inferred from the configuration).
        #[arg(long)]
        scenario: Option<Scenario>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the implementation against closed-form oracles.
    Verify {
        /// appendix, theorem1, fixedpoint or all
        #[arg(long, default_value = "all")]
        group: String,
        /// Random families for the theorem1 group.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Parses the process arguments and runs the command.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("colltherm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Run { scenario, config, out, seed } => cmd_run(scenario.as_deref(), config.as_deref(), &out, seed),
        Command::Sweep { config, axis, start, stop, step, scenario, out, seed } => {
            cmd_sweep(&config, &axis, (start, stop, step), scenario, &out, seed)
        }
        Command::Verify { group, trials, seed } => cmd_verify(&group, trials, seed),
    })
}

fn cmd_run(scenario: Option<&str>, config: Option<&Path>, out: &Path, seed: u64) -> Result<(), CliError> {
    let (label, plan) = match (config, scenario) {
        (Some(path), kind) => {
            let file = ConfigFile::load(path)?;
            let cfg = file.protocol()?;
            let sc = match kind {
                Some(k) => k.parse::<Scenario>().map_err(CliError::Config)?,
                None => file.scenario(&cfg),
            };
            (sc.name().to_string(), vec![PresetSeries { scenario: sc, grid: file.grid(&cfg)? }])
        }
        (None, Some(name)) => (name.to_string(), presets::preset(name)?),
        (None, None) => return Err(CliError::Config("run needs --scenario <fig2|fig3|fig4|fig5> or --config <file>".into())),
    };
    execute_plan(&label, config, plan, out, seed)
}

fn cmd_sweep(
    config: &Path,
    axis: &str,
    (start, stop, step): (f64, f64, f64),
    scenario: Option<Scenario>,
    out: &Path,
    seed: u64,
) -> Result<(), CliError> {
    let file = ConfigFile::load(config)?;
    let cfg = file.protocol()?;
    let axis: SweepAxis = axis.parse().map_err(CliError::Config)?;
    let sc = scenario.unwrap_or_else(|| file.scenario(&cfg));
    let grid = SweepGrid::range(axis, start, stop, step, cfg)?;
    execute_plan(sc.name(), Some(config), vec![PresetSeries { scenario: sc, grid }], out, seed)
}

fn execute_plan(label: &str, config: Option<&Path>, plan: Vec<PresetSeries>, out: &Path, seed: u64) -> Result<(), CliError> {
    let series: Vec<Series> = plan
        .into_iter()
        .map(|p| Series {
            scenario: p.scenario,
            ancilla_dim: p.grid.fixed.ancilla_dim,
            n_ancillas: p.grid.fixed.ancilla_count,
            theta_over_pi: p.grid.fixed.rotation.theta / std::f64::consts::PI,
            axis: p.grid.axis,
            rows: sweep(&p.grid, p.scenario),
        })
        .collect();

    let csv = render_csv(&series)?;
    write_atomic(out, &csv)?;
    let manifest = RunManifest::new(config, label, out, seed);
    let json = summary_path(out);
    write_summary(&json, &Summary::new(manifest, &series))?;

    for s in &series {
        let j = argmax_by(&s.rows, |r| r.eta_joint);
        let a = argmax_by(&s.rows, |r| r.eta_acc);
        let fmt = |i: Option<usize>, v: fn(&crate::protocols::SweepRow) -> f64| match i {
            Some(i) => format!("{:.4} at {} = {}", v(&s.rows[i]), s.axis.column(), output::format_number(s.rows[i].axis_value)),
            None => "n/a".into(),
        };
        println!(
            "{} d={} n={} θ/π={}: max η_joint {}; max η_acc {}",
            s.scenario,
            s.ancilla_dim,
            s.n_ancillas,
            output::format_number(s.theta_over_pi),
            fmt(j, |r| r.eta_joint),
            fmt(a, |r| r.eta_acc)
        );
    }
    println!("wrote {} and {}", out.display(), json.display());

    let failed: usize = series.iter().map(Series::failures).sum();
    if failed > 0 {
        let first = series.iter().flat_map(|s| &s.rows).find_map(|r| r.error.clone()).unwrap_or_default();
        return Err(CliError::Numerical(format!("{failed} grid point(s) failed; first: {first}")));
    }
    Ok(())
}

fn cmd_verify(group: &str, trials: usize, seed: u64) -> Result<(), CliError> {
    let groups = verify::Group::parse_list(group).map_err(CliError::Config)?;
    let opts = verify::VerifyOptions { trials, seed };
    let mut first_failure: Option<String> = None;
    for g in groups {
        let results = verify::run_group(g, &opts);
        let ok = results.iter().all(verify::OracleResult::passed);
        println!("[{}] {}", if ok { "PASS" } else { "FAIL" }, g.name());
        for r in &results {
            println!(
                "  {} {:<60} residual {:.3e} (tolerance {:.1e})",
                if r.passed() { "ok  " } else { "FAIL" },
                r.name,
                r.residual,
                r.tolerance
            );
            if !r.passed() && first_failure.is_none() {
                first_failure = Some(format!("{}: {} residual {:.3e}", g.name(), r.name, r.residual));
            }
        }
    }
    match first_failure {
        Some(f) => Err(CliError::Verify(f)),
        None => Ok(()),
    }
}
