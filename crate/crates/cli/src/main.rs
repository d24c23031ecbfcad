mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use tricoh::coherence::LogBase;
use tricoh::models::Model;

use crate::error::CliError;

/// Coherence decompositions along adiabatic sweeps of three-qubit spin models.
#[derive(Debug, Parser)]
#[command(name = "tricoh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact sweep plus split-step propagation; writes sweep_<model>.csv.
    Sweep(Common),
    /// Coherence ratios and monogamy along the sweep; writes ratios_<model>.csv.
    Ratios(Common),
    /// Tetrahedron embeddings at chosen couplings; writes geometry_<model>.json.
    Geometry {
        #[command(flatten)]
        common: Common,
        /// Coupling values, comma separated.
        #[arg(long = "j", value_delimiter = ',', num_args = 1..)]
        j_values: Vec<f64>,
    },
    /// Validates measured density matrices and scores them against the model.
    Tomo {
        #[command(flatten)]
        common: Common,
        /// Density-matrix JSON files.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Coupling of the reference ground state (default: end of the sweep).
        #[arg(long = "j")]
        j: Option<f64>,
        /// Project invalid matrices onto the nearest density matrix.
        #[arg(long)]
        repair: bool,
        /// Tolerance for Hermiticity, trace and positivity.
        #[arg(long, default_value_t = tricoh::qmat::EXPERIMENTAL_TOL)]
        tol: f64,
    },
    /// Checks every split-step slice against the exact propagator.
    TrotterAudit {
        #[command(flatten)]
        common: Common,
        /// Required unitary fidelity per slice.
        #[arg(long, default_value_t = 0.999)]
        threshold: f64,
        /// Slice length used for the error-scaling table.
        #[arg(long, default_value_t = 0.1)]
        scaling_tau: f64,
    },
    /// Writes the schedule, and refocusing parameters when the config has couplings.
    Schedule {
        #[command(flatten)]
        common: Common,
        /// Find the fewest adaptive steps that keep this minimum fidelity.
        #[arg(long)]
        search: Option<f64>,
    },
}

/// Options shared by every command.
#[derive(Debug, Args)]
struct Common {
    /// zz or zzz.
    #[arg(long, default_value = "zz")]
    model: Model,
    /// Number of schedule steps M (default 300 for zz, 200 for zzz).
    #[arg(long, visible_alias = "m-steps")]
    steps: Option<usize>,
    /// Slice length (default 0.7 for zz, 0.4 for zzz).
    #[arg(long)]
    tau: Option<f64>,
    /// linear, adaptive or file:PATH (a JSON array of coupling values).
    #[arg(long, default_value = "adaptive")]
    schedule: ScheduleSpec,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Parameter file (JSON, or TOML by extension).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Logarithm base for entropies: 2 or e.
    #[arg(long, default_value = "2")]
    log_base: LogBaseArg,
}

#[derive(Debug, Clone, PartialEq)]
enum ScheduleSpec {
    Linear,
    Adaptive,
    File(PathBuf),
}

impl FromStr for ScheduleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(ScheduleSpec::Linear),
            "adaptive" => Ok(ScheduleSpec::Adaptive),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(ScheduleSpec::File(PathBuf::from(p))),
                _ => Err(format!("expected linear, adaptive or file:PATH, got `{s}`")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct LogBaseArg(LogBase);

impl FromStr for LogBaseArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(LogBaseArg(LogBase::Two)),
            "e" => Ok(LogBaseArg(LogBase::E)),
            _ => Err(format!("expected 2 or e, got `{s}`")),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl Common {
    fn usage_checks(&self) -> Result<(), CliError> {
        if self.steps == Some(0) {
            return Err(CliError::Usage("--steps must be at least 1".into()));
        }
        if let Some(t) = self.tau {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("--tau must be positive, got {t}")));
            }
        }
        Ok(())
    }
}
