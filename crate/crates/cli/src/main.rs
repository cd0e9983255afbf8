use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use hypergroup_core::harness::{
    positivity_table, run_tables, run_verify, write_positivity_csv, write_walk_csv, Overrides, RunConfig, Suite,
};
use hypergroup_core::ExecPolicy;

#[derive(Parser)]
#[command(name = "hypergroup", version, about = "Product formulas and hypergroup convolutions on Weyl chambers")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Run the check registry and emit a JSON report.
    Verify,
    /// Positivity scan over a grid of l.
    Scan,
    /// Random walk from the identity.
    Walk,
    /// kappa, c-function, Haar and positivity tables as CSV.
    Tables,
}

#[derive(Args)]
struct Opts {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    q: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    l: Option<f64>,
    /// Comma-separated spectral parameters, e.g. "0.5,2,1+0.3i".
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Sample count (walk: number of steps).
    #[arg(long, global = true)]
    n: Option<i64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suite to run when no subcommand is given.
    #[arg(long, global = true)]
    suite: Option<Suite>,
    /// Report file (verify, scan, walk) or directory (tables).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run sampling loops on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let o = &cli.opts;
    let suite = match cli.command {
        Some(Command::Verify) => Some(Suite::Verify),
        Some(Command::Scan) => Some(Suite::Scan),
        Some(Command::Walk) => Some(Suite::Walk),
        Some(Command::Tables) => Some(Suite::Tables),
        None => o.suite,
    };
    let overrides = Overrides {
        q: o.q,
        p: o.p,
        l: o.l,
        lambda: o.lambda.clone(),
        n_samples: o.n,
        seed: o.seed,
        suite,
        output_path: o.out.clone(),
    };
    let cfg = RunConfig::load(o.config.as_deref(), &overrides)?;
    let policy = if o.sequential { ExecPolicy::Sequential } else { ExecPolicy::Parallel };
    match cfg.suite {
        Suite::Verify => {
            let report = run_verify(&cfg, policy)?;
            emit(cfg.output_path.as_deref(), (report.to_json() + "\n").as_bytes())?;
            for c in report.failed_assertions() {
                eprintln!("FAIL {}: {} > {}", c.check, c.value, c.tol);
            }
            Ok(if report.success() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Suite::Scan => {
            let rows = positivity_table(&cfg, policy)?;
            let mut buf = Vec::new();
            write_positivity_csv(&rows, cfg.n_samples, &mut buf)?;
            emit(cfg.output_path.as_deref(), &buf)?;
            Ok(ExitCode::SUCCESS)
        }
        Suite::Walk => {
            let mut buf = Vec::new();
            write_walk_csv(&cfg, &mut buf)?;
            emit(cfg.output_path.as_deref(), &buf)?;
            Ok(ExitCode::SUCCESS)
        }
        Suite::Tables => {
            let dir = cfg.output_path.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in run_tables(&cfg, &dir, policy)? {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Writes to `path`, or to stdout when none is given.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(bytes).context("writing to stdout"),
    }
}
