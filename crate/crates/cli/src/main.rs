//! `steklov-lab`: batch front end for the Steklov, constants, volume and
//! bound computations.
//!
//! Exit codes: 0 success, 1 input error, 2 a mathematical check failed.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Decimal;

/// Why a run stopped short of success.
#[derive(Debug)]
pub enum Failure {
    Input(String),
}

#[derive(Parser)]
#[command(name = "steklov-lab", version, about = "Steklov eigenvalues, isoperimetric constants and Weil-Petersson volume checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn decimal(s: &str) -> Result<Decimal, String> {
    Decimal::parse(s)
}

#[derive(Subcommand)]
enum Command {
    /// Steklov spectrum of one surface and the two upper-bound verdicts.
    Steklov {
        #[arg(long)]
        surface: PathBuf,
        /// Target edge length; defaults to the value in the surface file.
        #[arg(long)]
        resolution: Option<f64>,
        /// Number of eigenvalues.
        #[arg(short = 'k', default_value_t = 5)]
        k: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Cheeger and modified Jammes estimates with the Jammes slack.
    Constants {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        resolution: Option<f64>,
        /// Also sweep superlevel sets of the first eigenfunction.
        #[arg(long)]
        with_levelset: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Exact volume polynomials, their text export and the lemma checks.
    Volumes {
        /// Largest 3g + n - 3 tabled.
        #[arg(long, default_value_t = 12)]
        budget: usize,
        /// Significant digits for evaluated volumes.
        #[arg(long, default_value_t = 30)]
        precision: u32,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Probability bound expressions on a genus grid.
    Bounds {
        #[arg(long, default_value = "0.1", value_parser = decimal)]
        eps: Decimal,
        #[arg(long, default_value = "0.1", value_parser = decimal)]
        eps_prime: Decimal,
        #[arg(long, default_value = "0.08", value_parser = decimal)]
        c1: Decimal,
        #[arg(long, default_value = "0.085", value_parser = decimal)]
        c2: Decimal,
        /// `a:b` for 10^a..10^b, or a comma list.
        #[arg(long, default_value = "3:9")]
        grid: String,
        #[arg(long, default_value_t = 12)]
        budget: usize,
        #[arg(long, default_value_t = 40)]
        precision: u32,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Full acceptance suite with per-check artifacts and a summary.
    VerifyAll {
        #[arg(long, default_value_t = 12)]
        budget: usize,
        #[arg(long, default_value_t = 0.1)]
        resolution: f64,
        #[arg(long, default_value = "0.1", value_parser = decimal)]
        eps: Decimal,
        #[arg(long, default_value = "0.1", value_parser = decimal)]
        eps_prime: Decimal,
        /// Cheeger lower bound; defaults to ln2/(2 pi + ln2).
        #[arg(long, value_parser = decimal)]
        c1: Option<Decimal>,
        #[arg(long, default_value = "3:9")]
        grid: String,
        #[arg(long, default_value_t = 40)]
        precision: u32,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("STEKLOV_LAB_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("STEKLOV_LAB_THREADS = `{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<i32, Failure> {
    init_threads()?;
    match cli.command {
        Command::Steklov { surface, resolution, k, out } => {
            commands::steklov(commands::SteklovArgs { surface: &surface, resolution, k, out: &out })
        }
        Command::Constants { surface, resolution, with_levelset, out } => {
            commands::constants(commands::ConstantsArgs { surface: &surface, resolution, with_levelset, out: &out })
        }
        Command::Volumes { budget, precision, out } => {
            commands::volumes(commands::VolumesArgs { budget, precision, out: &out })
        }
        Command::Bounds { eps, eps_prime, c1, c2, grid, budget, precision, out } => {
            commands::bounds(commands::BoundsArgs { eps, eps_prime, c1, c2, grid, budget, precision, out: &out })
        }
        Command::VerifyAll { budget, resolution, eps, eps_prime, c1, grid, precision, out } => {
            commands::verify_all(commands::VerifyArgs { budget, resolution, eps, eps_prime, c1, grid, precision, out: &out })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version are successes; every other parse problem is
            // an input error.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
