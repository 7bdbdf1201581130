//! `backhaul`: coverage evaluation, sweeps, closed-form solvers and raw
//! Monte Carlo drops for full-duplex wirelessly backhauled small cells.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error, 3 some
//! sweep rows failed (the output is still written). Errors are reported on
//! stderr as a single JSON object.

mod eval;
mod output;

use backhaul_core::config::{parse_config, ConfigError, Evaluation, OutputFormat, RunConfig};
use backhaul_core::sim::{simulate, write_records};
use clap::{Args, Parser, Subcommand};
use eval::{SolveVariant, Target};
use serde_json::json;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "backhaul", version, about = "Rate coverage of full-duplex small cells with massive-MIMO wireless backhaul")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// configuration file; defaults apply when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Monte Carlo drops
    #[arg(long, global = true)]
    drops: Option<u64>,
    /// Monte Carlo master seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_parser = ["analytic", "mc", "both"])]
    method: Option<String>,
    /// omit the generation time and per-row wall times
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured point
    Coverage,
    /// Evaluate every point of the configured sweep axes
    Sweep,
    /// Closed-form q* or balance point under perfect backhaul
    Solve {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, value_enum, default_value = "exact")]
        variant: SolveVariant,
    },
    /// Write per-drop Monte Carlo records as JSON lines
    Simulate,
    /// Parse and validate the configuration, then print it as JSON
    ValidateConfig,
}

enum Failure {
    Config(ConfigError),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<backhaul_core::Error> for Failure {
    fn from(e: backhaul_core::Error) -> Self {
        match e {
            backhaul_core::Error::Config(c) => Failure::Config(c),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load_config(opts: &Opts) -> Result<RunConfig, Failure> {
    let mut cfg = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    let flag = |field: &str, message: String| ConfigError { line: 0, field: field.into(), message };
    if let Some(out) = &opts.out {
        cfg.out = Some(out.clone());
    }
    if let Some(f) = &opts.format {
        cfg.format = f.parse::<OutputFormat>().map_err(|m| flag("format", m))?;
    }
    if let Some(m) = &opts.method {
        cfg.method = m.parse::<Evaluation>().map_err(|m| flag("method", m))?;
    }
    if let Some(d) = opts.drops {
        cfg.sim.drops = d;
    }
    if let Some(s) = opts.seed {
        cfg.sim.seed = s;
    }
    if opts.no_timestamp {
        cfg.timestamp = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sink(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn generated(cfg: &RunConfig) -> Option<String> {
    cfg.timestamp.then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let mut cfg = load_config(&cli.opts)?;
    match cli.command {
        Command::Coverage | Command::Sweep => {
            if matches!(cli.command, Command::Coverage) {
                cfg.sweep.clear();
            } else if cfg.sweep.is_empty() {
                return Err(ConfigError {
                    line: 0,
                    field: "sweep".into(),
                    message: "no sweep axes configured, add 'sweep = name:start:stop:steps' under [cli]".into(),
                }
                .into());
            }
            let rows = eval::run_sweep(&cfg);
            let mut w = sink(&cfg)?;
            output::write_rows(&mut w, &rows, cfg.format, generated(&cfg).as_deref())?;
            w.flush()?;
            Ok(if rows.iter().any(eval::row_failed) { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::Solve { target, variant } => {
            if !cfg.perfect_backhaul {
                return Err(ConfigError {
                    line: 0,
                    field: "perfect_backhaul".into(),
                    message: "the closed forms ignore backhaul; set perfect_backhaul = true under \
                              [analytic-coverage] to acknowledge"
                        .into(),
                }
                .into());
            }
            let row = eval::solve(&cfg, target, variant)?;
            let mut w = sink(&cfg)?;
            output::write_rows(&mut w, &[row], cfg.format, generated(&cfg).as_deref())?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate => {
            let records = simulate(&cfg.network, &cfg.mitigation, &cfg.sim)?;
            let mut w = sink(&cfg)?;
            write_records(&mut w, &records)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateConfig => {
            let mut w = sink(&cfg)?;
            serde_json::to_writer_pretty(&mut w, &cfg).map_err(|e| Failure::Runtime(e.to_string()))?;
            writeln!(w)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            let line = (e.line > 0).then_some(e.line);
            let record = json!({"error": "config", "line": line, "field": e.field, "message": e.message});
            eprintln!("{record}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(message)) => {
            eprintln!("{}", json!({"error": "runtime", "message": message}));
            ExitCode::FAILURE
        }
    }
}
