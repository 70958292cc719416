//! Command-line front end: argument parsing, run configuration and the
//! subcommands wrapping the `mrem` library.

pub mod config;
pub mod fixtures;

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::RunConfig;
pub use fixtures::{validate_fixtures, FixtureReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Library(#[from] mrem::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Library(e) => match e {
                mrem::Error::Parse { .. } | mrem::Error::Config(_) | mrem::Error::Io(_) | mrem::Error::Json(_) => {
                    EXIT_USAGE
                }
                _ => EXIT_INTERNAL,
            },
            CliError::Io(_) => EXIT_INTERNAL,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Library(e) => e.kind(),
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON error record for stderr.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string().replace('\n', " "),
        })
        .to_string()
    }
}

/// Shot count or `off`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShotsArg {
    Off,
    Count(u64),
}

fn parse_shots(s: &str) -> Result<ShotsArg, String> {
    if s.eq_ignore_ascii_case("off") {
        return Ok(ShotsArg::Off);
    }
    match s.parse::<u64>() {
        Ok(0) => Err("shot count must be at least 1".into()),
        Ok(n) => Ok(ShotsArg::Count(n)),
        Err(_) => Err(format!("expected a shot count or 'off', got {s:?}")),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mrem",
    version,
    about = "Multireference-state error mitigation for noisy VQE"
)]
pub struct Cli {
    /// Run configuration JSON; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for gate-noise and shot-noise streams
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Directory for written artifacts [default: mrem-out]
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Disable gate noise
    #[arg(long, global = true)]
    pub noiseless: bool,
    /// Measurement shots per energy estimate, or `off` for exact expectations
    #[arg(long, global = true, value_name = "N|off", value_parser = parse_shots)]
    pub shots: Option<ShotsArg>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a Pauli-sum Hamiltonian and print a summary
    Parse(HamiltonianArg),
    /// Exact ground energy by dense diagonalization
    Exact(HamiltonianArg),
    /// Find Z2 symmetries and write the tapered Hamiltonian
    Taper(TaperArgs),
    /// Compile a multireference target onto a template
    Prep(PrepArgs),
    /// Minimize the VQE energy with implicit filtering
    Vqe(VqeArgs),
    /// Run REM and/or MREM for one geometry
    Mrem(MremArgs),
    /// Sweep a list of geometries and write the results CSVs
    Pes(PesArgs),
    /// Check the shipped reference tables against the library
    ValidateFixtures(FixtureArgs),
}

#[derive(Debug, Args)]
pub struct HamiltonianArg {
    /// Pauli-sum text file (falls back to `hamiltonian` in the config)
    pub hamiltonian: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TaperArgs {
    /// Pauli-sum text file (falls back to `hamiltonian` in the config)
    pub hamiltonian: Option<PathBuf>,
    /// Pick the sector containing this determinant bitstring
    #[arg(long, value_name = "BITS", conflicts_with = "sector")]
    pub det: Option<String>,
    /// Explicit sector as comma-separated +1/-1 values
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub sector: Option<String>,
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    /// Multireference target JSON
    #[arg(long, value_name = "FILE")]
    pub target: Option<PathBuf>,
    /// Template circuit JSON
    #[arg(long, value_name = "FILE")]
    pub template: Option<PathBuf>,
    /// Use these comma-separated angles instead of solving
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub params: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnsatzArgs {
    /// Layers of the RY-linear ansatz
    #[arg(long, value_name = "L")]
    pub layers: Option<usize>,
    /// Spin-penalty weight lambda
    #[arg(long, value_name = "X")]
    pub lambda: Option<f64>,
    /// Orbital layout n_spatial,n_alpha,n_beta for the spin penalty
    #[arg(long, value_name = "S,A,B")]
    pub layout: Option<String>,
    /// Objective-evaluation budget for the optimizer
    #[arg(long, value_name = "N")]
    pub budget: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VqeArgs {
    /// Pauli-sum text file (falls back to `hamiltonian` in the config)
    pub hamiltonian: Option<PathBuf>,
    /// Initial determinant bitstring prepared by X gates
    #[arg(long, value_name = "BITS", conflicts_with = "target")]
    pub det: Option<String>,
    /// Multireference target JSON for the initial state
    #[arg(long, value_name = "FILE", requires = "template")]
    pub target: Option<PathBuf>,
    /// Template circuit JSON for the initial state
    #[arg(long, value_name = "FILE")]
    pub template: Option<PathBuf>,
    #[command(flatten)]
    pub ansatz: AnsatzArgs,
}

#[derive(Debug, Args)]
pub struct MremArgs {
    /// Pauli-sum text file (falls back to `hamiltonian` in the config)
    pub hamiltonian: Option<PathBuf>,
    /// Multireference target JSON; its reference is the HF determinant
    #[arg(long, value_name = "FILE")]
    pub target: Option<PathBuf>,
    /// Template circuit JSON
    #[arg(long, value_name = "FILE")]
    pub template: Option<PathBuf>,
    /// Only the HF-referenced (REM) run
    #[arg(long, conflicts_with = "mr_only")]
    pub hf_only: bool,
    /// Only the MR-referenced (MREM) run
    #[arg(long)]
    pub mr_only: bool,
    #[command(flatten)]
    pub ansatz: AnsatzArgs,
}

#[derive(Debug, Args)]
pub struct PesArgs {
    /// JSON list of {label, r, hamiltonian, target, template}
    pub points: Option<PathBuf>,
    /// Only the HF-referenced (REM) runs
    #[arg(long, conflicts_with = "mr_only")]
    pub hf_only: bool,
    /// Only the MR-referenced (MREM) runs
    #[arg(long)]
    pub mr_only: bool,
    #[command(flatten)]
    pub ansatz: AnsatzArgs,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    /// Fixture root containing tables/ and templates/
    #[arg(long, value_name = "DIR", default_value = "fixtures")]
    pub fixtures: PathBuf,
}

/// Parses `args`, runs the command and returns the exit code. Normal output
/// goes to `stdout`, warnings and the one-line error record to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let err = CliError::usage(e.to_string().lines().next().unwrap_or("usage error").to_owned());
            let _ = writeln!(stderr, "{}", err.to_json_line());
            return code;
        }
    };
    match commands::dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json_line());
            e.exit_code()
        }
    }
}
