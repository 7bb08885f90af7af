//! `horolab`: runs one experiment from a config file and writes its artifacts.

mod commands;
mod config;
mod error;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use commands::{Context, Mode, Subcommand};
use config::Config;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "horolab", version, about = "Interval exchanges, flat suspensions, train tracks and surface-group samplers")]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    subcommand: Subcommand,

    /// Config file with [input], [params], [output] and [run] sections.
    config: PathBuf,

    /// Seed for every random choice (overrides `run.seed`).
    #[arg(long)]
    seed: Option<u64>,

    /// Arithmetic backend (overrides `run.mode`).
    #[arg(long, value_enum)]
    mode: Option<Mode>,

    /// Artifact directory (overrides `output.dir`).
    #[arg(long)]
    out_dir: Option<PathBuf>,

    /// Also write a gnuplot script (same as `output.plot = true`).
    #[arg(long)]
    plot: bool,
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&cli.config).map_err(|e| CliError::Config {
        line: 0,
        field: "config".into(),
        message: format!("{}: {e}", cli.config.display()),
    })?;
    let config = Config::parse(&text)?;
    let seed = match cli.seed {
        Some(s) => s,
        None => config.parsed_or("run.seed", 0u64)?,
    };
    let mode = match cli.mode {
        Some(m) => m,
        None => match config.get("run.mode") {
            None => Mode::Float,
            Some(e) => match e.value.as_str() {
                "float" => Mode::Float,
                "exact" => Mode::Exact,
                other => return Err(CliError::config(e.line, "run.mode", format!("`{other}` is not `float` or `exact`"))),
            },
        },
    };
    let base_dir = cli.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let out_dir = match (&cli.out_dir, config.get("output.dir")) {
        (Some(dir), _) => dir.clone(),
        (None, Some(e)) => base_dir.join(&e.value),
        (None, None) => PathBuf::from("out"),
    };
    let plot = cli.plot || config.flag("output.plot")?;

    let mut ctx = Context::new(&config, mode, seed, &base_dir);
    let mut report = cli.subcommand.run(&mut ctx)?;
    debug_assert!(
        report.metrics.keys().eq(sorted(cli.subcommand.metric_keys()).iter()),
        "metric keys drifted from the schema table"
    );
    for key in config.unused() {
        eprintln!("warning: `{key}` is not used by {}", cli.subcommand.name());
        report.flag(format!("unused_key:{key}"));
    }
    let mut echo = config.echo();
    echo.insert("run.seed".into(), seed.to_string());
    echo.insert("run.mode".into(), mode.as_str().into());
    let summary = report::summary(cli.subcommand.name(), &echo, &report, started.elapsed().as_millis());
    report::write_artifacts(&out_dir, cli.subcommand.name(), &report, &summary, plot)
}

fn sorted(keys: &[&str]) -> Vec<String> {
    let mut keys: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
    keys.sort();
    keys
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
