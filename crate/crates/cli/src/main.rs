use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nbsd::{Error, ErrorCategory, Interval, ModelKind};

mod commands;
mod strategy;

use strategy::StrategyArg;

/// Interval-valued Birnbaum-Saunders fitting, goodness of fit and simulation.
#[derive(Debug, Parser)]
#[command(name = "nbsd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a model and report interval estimates with AIC and BIC.
    Fit {
        /// Dataset: one observation per line, a number or `[lo, hi]`.
        file: PathBuf,
        #[arg(long, default_value = "nbs", value_parser = parse_model)]
        model: ModelKind,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Modified Kolmogorov-Smirnov test with a Monte Carlo p-value.
    Gof {
        file: PathBuf,
        #[arg(long, default_value = "nbs", value_parser = parse_model)]
        model: ModelKind,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Fit and test every model and print one summary row per model.
    Compare {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Density, distribution and hazard bands over a parameter box.
    Curves {
        /// Shape, a number or `[lo, hi]`.
        #[arg(long, value_parser = parse_iv)]
        alpha: Interval,
        /// Scale, a number or `[lo, hi]`.
        #[arg(long, value_parser = parse_iv)]
        beta: Interval,
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Monte Carlo study of the interval MLE; one row per (eps, n).
    Simulate {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Sample sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Indeterminacy half-widths, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Points of the indeterminacy space to fit: auto, corners, endpoints,
    /// random:M or grid:K.
    #[arg(long, default_value = "auto")]
    pub strategy: StrategyArg,
    /// Seed for random search points and Monte Carlo replicates.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Use a `4 ln n` BIC penalty instead of `2 ln n`.
    #[arg(long)]
    pub paper_compat_bic: bool,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_iv(s: &str) -> Result<Interval, String> {
    nbsd::parse_interval(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> nbsd::Result<String> {
    match cli.command {
        Command::Fit {
            file,
            model,
            search,
            format,
        } => commands::fit(&file, model, &search, format),
        Command::Gof {
            file,
            model,
            reps,
            seed,
            format,
        } => commands::gof(&file, model, reps, seed, format),
        Command::Compare {
            file,
            search,
            reps,
            format,
        } => commands::compare(&file, &search, reps, format),
        Command::Curves {
            alpha,
            beta,
            t_min,
            t_max,
            points,
            format,
        } => commands::curves(alpha, beta, t_min, t_max, points, format),
        Command::Simulate {
            alpha,
            beta,
            n,
            eps,
            reps,
            seed,
            format,
        } => commands::simulate(alpha, beta, &n, &eps, reps, seed, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.category() {
                ErrorCategory::Usage => 2,
                ErrorCategory::Data => 3,
                ErrorCategory::Numerical => 4,
            })
        }
    }
}
