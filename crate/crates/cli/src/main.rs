use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;

use error::CliError;

#[derive(Parser)]
#[command(name = "smdecouple", version, about = "Smith-McMillan decoupling of square MIMO plants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smith-McMillan decomposition of a plant: writes U.json, V.json,
    /// psm.json and certificate.json.
    Smith {
        plant: PathBuf,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Internal stability report of a plant/controller pair.
    Stability {
        plant: PathBuf,
        controller: PathBuf,
        #[arg(long, default_value_t = smdecouple::stability::DEFAULT_POLE_TOL)]
        pole_tol: f64,
        /// Report file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted singular-value performance check.
    Perf {
        plant: PathBuf,
        controller: PathBuf,
        /// Scalar weight as a rational function JSON.
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, value_enum, default_value = "S")]
        sensitivity: Sensitivity,
        #[arg(long, value_enum, default_value = "original")]
        bound: BoundKind,
        /// Output transformation for the essential bound; computed if omitted.
        #[arg(long, requires = "v")]
        u: Option<PathBuf>,
        #[arg(long, requires = "u")]
        v: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        /// Curves CSV; not written if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduces the two-mass example end to end into a directory.
    Example {
        outdir: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = smdecouple::stability::DEFAULT_POLE_TOL)]
        pole_tol: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sensitivity {
    #[value(name = "S")]
    S,
    #[value(name = "T")]
    T,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    Original,
    Essential,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 0.01)]
    freq_min_hz: f64,
    #[arg(long, default_value_t = 100.0)]
    freq_max_hz: f64,
    #[arg(long, default_value_t = 50)]
    points_per_decade: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<smdecouple::freq::FrequencyGrid, CliError> {
        if !(self.freq_min_hz > 0.0 && self.freq_min_hz < self.freq_max_hz && self.freq_max_hz.is_finite()) {
            return Err(CliError::Usage(format!(
                "frequency range must satisfy 0 < min < max, got [{}, {}]",
                self.freq_min_hz, self.freq_max_hz
            )));
        }
        Ok(smdecouple::freq::FrequencyGrid::from_hz(
            self.freq_min_hz,
            self.freq_max_hz,
            self.points_per_decade,
        )?)
    }
}

fn check_tol(tol: f64) -> Result<f64, CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("tolerance must be positive, got {tol}")))
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Smith { plant, out } => commands::smith(&plant, &out),
        Command::Stability {
            plant,
            controller,
            pole_tol,
            out,
        } => commands::stability(&plant, &controller, check_tol(pole_tol)?, out.as_deref()),
        Command::Perf {
            plant,
            controller,
            weight,
            sensitivity,
            bound,
            u,
            v,
            grid,
            out,
        } => commands::perf(&commands::PerfJob {
            plant: &plant,
            controller: &controller,
            weight: &weight,
            complementary: sensitivity == Sensitivity::T,
            essential: bound == BoundKind::Essential,
            transforms: u.as_deref().zip(v.as_deref()),
            grid: grid.grid()?,
            out: out.as_deref(),
        }),
        Command::Example { outdir, grid, pole_tol } => commands::example(&outdir, &grid.grid()?, check_tol(pole_tol)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
