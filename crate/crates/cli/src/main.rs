mod render;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use run::{Outcome, RunSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Fit a fixed number of coefficients.
    Fit,
    /// Search for the best parameter count and tolerance.
    Search,
    /// Sample the boundary of a coefficients file.
    Evaluate,
    /// Emit the two-parameter Lewis form only.
    Lewis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
    Svg,
}

/// Conformal mapping of ship sections onto the unit circle.
#[derive(Debug, Parser)]
#[command(name = "hullmap", version)]
struct Cli {
    mode: Mode,
    /// Offsets file or a directory of them; a coefficients or report JSON
    /// for `evaluate`.
    #[arg(long)]
    input: PathBuf,
    /// Number of free coefficients (required for `fit`).
    #[arg(long)]
    n: Option<usize>,
    /// Error tolerance for `fit`. Defaults to 1e-6 times the squared
    /// section scale.
    #[arg(long = "sigma-e")]
    sigma_e: Option<f64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json")]
    emit: Vec<Emit>,
    /// Points sampled along plotted and CSV contours.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(2..))]
    samples: u32,
    /// Report zero for all timings so outputs are reproducible.
    #[arg(long)]
    no_timing: bool,
    /// For `evaluate`: sample at the angles stored in this report instead
    /// of a uniform grid.
    #[arg(long)]
    at: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.mode == Mode::Fit && cli.n.is_none() {
        eprintln!("error [usage]: `fit` requires --n");
        return ExitCode::from(run::EXIT_USAGE);
    }
    if cli.sigma_e.is_some_and(|s| !(s > 0.0)) {
        eprintln!("error [usage]: --sigma-e must be positive");
        return ExitCode::from(run::EXIT_USAGE);
    }
    let mut emit = cli.emit.clone();
    emit.sort();
    emit.dedup();
    let spec = RunSpec {
        mode: cli.mode,
        n: cli.n,
        sigma_e: cli.sigma_e,
        output_dir: cli.out.clone(),
        emit,
        samples: cli.samples as usize,
        timing: !cli.no_timing,
        thetas_from: cli.at.clone(),
    };

    if let Err(e) = std::fs::create_dir_all(&spec.output_dir) {
        eprintln!("error [emit]: cannot create {}: {e}", spec.output_dir.display());
        return ExitCode::from(1);
    }
    let inputs = match run::collect_inputs(&cli.input) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error [parse]: {e:#}");
            return ExitCode::from(run::EXIT_PARSE);
        }
    };

    let outcomes = run::run_all(&spec, &inputs);
    let mut code = 0;
    for (path, outcome) in inputs.iter().zip(outcomes) {
        match outcome {
            Ok(Outcome { summary }) => println!("{summary}"),
            Err(f) => {
                eprintln!("error [{}] {}: {:#}", f.stage, path.display(), f.error);
                code = code.max(f.code);
            }
        }
    }
    ExitCode::from(code)
}
