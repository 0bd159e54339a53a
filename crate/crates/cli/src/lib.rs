//! Command-line front end for the gyroneedle model.

pub mod commands;
pub mod config;
pub mod error;

use clap::{Args, Parser, Subcommand};
use gyroneedle_core::PhysicalConstants;
use std::io::Write;
use std::path::PathBuf;

use commands::{BudgetArgs, SweepParameter};
use config::{Format, RunConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "gyroneedle",
    version,
    about = "Precessing ferromagnetic needle magnetometer model"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in configuration instead of --config.
    #[arg(long, global = true, value_name = "NAME", value_parser = clap::builder::PossibleValuesParser::new(config::PRESETS))]
    pub preset: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Output format. Each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// RNG seed for Monte Carlo runs.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Suppress summaries and warnings.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived needle quantities, thresholds and the operating regime.
    Derive,
    /// Integrate the full spin-lattice equations.
    Dynamics {
        /// Simulated time in seconds; overrides `dynamics.duration_s`.
        #[arg(long, value_name = "S")]
        duration: Option<f64>,
    },
    /// Noise budget over a log-spaced measurement-time grid.
    Budget {
        #[arg(long, value_name = "S")]
        t_min: Option<f64>,
        #[arg(long, value_name = "S")]
        t_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Add the thermal-current bound to the total.
        #[arg(long)]
        include_thermal_current: bool,
    },
    /// Monte Carlo random walk of the precession phase under kicks.
    Mc {
        /// Comma-separated durations in seconds.
        #[arg(long, value_delimiter = ',', value_name = "S,...")]
        durations: Option<Vec<f64>>,
        /// Trials per duration (at least 100).
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Key figures across a range of one parameter.
    Sweep {
        #[arg(long, value_enum)]
        parameter: SweepParameter,
        /// Comma-separated values (cgs, K, cm⁻³ or G·cm²/√Hz).
        #[arg(
            long,
            value_delimiter = ',',
            required_unless_present = "range",
            conflicts_with = "range"
        )]
        values: Option<Vec<f64>>,
        /// Log-spaced values as START:STOP:COUNT.
        #[arg(long)]
        range: Option<String>,
        /// Hold length/radius fixed while sweeping length or radius.
        #[arg(long, value_name = "RATIO")]
        aspect_ratio: Option<f64>,
    },
    /// Print the configuration with every default filled in.
    Config,
}

fn load_config(global: &GlobalArgs) -> Result<RunConfig, CliError> {
    match (&global.config, &global.preset) {
        (Some(path), _) => RunConfig::load(path),
        (None, Some(name)) => RunConfig::preset(name)
            .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`"))),
        (None, None) => Err(CliError::Usage(
            "no configuration given: pass --config PATH or --preset cobalt-reference".into(),
        )),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let constants = PhysicalConstants::CODATA;
    let config = load_config(&cli.global)?;
    let scenario = config.scenario(&constants)?;
    if let (Some(w), false) = (
        scenario.geometry.single_domain_warning(),
        matches!(cli.command, Command::Sweep { .. } | Command::Derive),
    ) {
        log::warn!("{w}");
    }
    let report = match &cli.command {
        Command::Derive => commands::derive(&config, &scenario)?,
        Command::Dynamics { duration } => commands::dynamics(&config, &scenario, *duration)?,
        Command::Budget {
            t_min,
            t_max,
            points,
            include_thermal_current,
        } => {
            let b = config.budget.clone().unwrap_or_default();
            let args = BudgetArgs {
                t_min: t_min.unwrap_or(b.t_min_s),
                t_max: t_max.unwrap_or(b.t_max_s),
                points: points.unwrap_or(b.points),
                include_thermal_current: *include_thermal_current || b.include_thermal_current,
            };
            commands::budget(&scenario, &args)?
        }
        Command::Mc { durations, trials } => commands::mc(
            &config,
            &scenario,
            durations.clone(),
            *trials,
            cli.global.seed,
        )?,
        Command::Sweep {
            parameter,
            values,
            range,
            aspect_ratio,
        } => {
            let values = match (values, range) {
                (Some(v), _) => v.clone(),
                (None, Some(r)) => commands::log_range(r)?,
                (None, None) => return Err(CliError::Usage("give --values or --range".into())),
            };
            commands::sweep(&config, &scenario, *parameter, &values, *aspect_ratio)?
        }
        Command::Config => {
            let full = config.with_defaults(&constants)?;
            let mut text = serde_json::to_string_pretty(&full).expect("config serialises");
            text.push('\n');
            commands::Report {
                default_format: Format::Json,
                csv: text.clone(),
                json: serde_json::to_value(&full).expect("config serialises"),
                summary: Vec::new(),
            }
        }
    };
    emit(cli, &config, &report)
}

fn emit(cli: &Cli, config: &RunConfig, report: &commands::Report) -> Result<(), CliError> {
    let out_cfg = config.output.clone().unwrap_or_default();
    let path = cli
        .global
        .output
        .clone()
        .or(out_cfg.path.map(PathBuf::from));
    let inferred = path
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| match e.to_str() {
            Some("csv") => Some(Format::Csv),
            Some("json") => Some(Format::Json),
            _ => None,
        });
    let format = cli
        .global
        .format
        .or(out_cfg.format)
        .or(inferred)
        .unwrap_or(report.default_format);
    let body = if matches!(cli.command, Command::Config) {
        report.render(Format::Json)
    } else {
        report.render(format)
    };
    match &path {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    if !cli.global.quiet {
        for line in &report.summary {
            eprintln!("{line}");
        }
        if let Some(p) = &path {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}
