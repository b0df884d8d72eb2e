//! The `beables` command-line tool.
//!
//! Every subcommand resolves an [`ExperimentConfig`] from defaults, an
//! optional `--config` file, the `BEABLES_SEED` environment variable and its
//! own flags, in that order of increasing precedence, and prints a report
//! wrapped together with a [`RunManifest`].

mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use beable_lab::expectation::ExperimentConfig;
use beable_lab::ga::Vector3;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{load_config, parse_config, LoadedConfig};
pub use report::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 74;

pub const SEED_ENV: &str = "BEABLES_SEED";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("invalid value for `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("malformed config JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        Self::Field { field: field.to_owned(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Field { .. } => EXIT_VALIDATION,
            Self::Json { .. } => EXIT_DATA,
            Self::Usage(_) => EXIT_USAGE,
            Self::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "beables", version, about = "Bivector beable correlation laboratory")]
struct Cli {
    /// JSON file with experiment settings.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ensemble correlation E(a, b), or a curve over the angle between them.
    Correlation(CorrelationArgs),
    /// The CHSH combination of four correlations.
    Chsh(ChshArgs),
    /// |S| over a one-parameter family of detector settings.
    ChshScan(ScanArgs),
    /// Monte Carlo estimate of E(a, b).
    Mc(McArgs),
    /// Scalar, bivector and expectation-functional axiom suites.
    Axioms(AxiomsArgs),
    /// Literal geometric product against the closed-form pair product.
    Discrepancy(PairArgs),
    /// Determinant of the Euler-rate map across pitch.
    Gimbal,
    /// Directed area of a closed triangulated surface.
    Surface(SurfaceArgs),
    /// Bell's sign model against the linear and cosine curves.
    BaselineBell(BaselineArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Pair-product evaluator: `paper` (closed form) or `geometric`.
    #[arg(long)]
    evaluator: Option<String>,

    /// Weight of the +I microstate; -I gets the rest.
    #[arg(long, value_name = "P")]
    ensemble: Option<f64>,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Alice's direction as x,y,z.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    a: Option<Vector3>,

    /// Bob's direction as x,y,z.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    b: Option<Vector3>,
}

#[derive(Debug, Args)]
struct CorrelationArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[command(flatten)]
    model: ModelArgs,

    /// Emit a CSV curve over 0..=180 degrees in the plane of a and b.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Debug, Args)]
struct ChshArgs {
    /// Angles a,a',b,b' in degrees about e3.
    #[arg(long, value_parser = parse_angles, allow_hyphen_values = true)]
    angles: Option<[f64; 4]>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 181)]
    steps: usize,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct McArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct AxiomsArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    /// cube, tet or icosphere:k.
    #[arg(long, default_value = "cube")]
    shape: String,

    /// OFF mesh file; takes precedence over --shape.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,

    /// Emit a CSV curve over 0..=180 degrees in the plane of a and b.
    #[arg(long)]
    steps: Option<usize>,
}

fn parse_numbers<const N: usize>(text: &str) -> Result<[f64; N], String> {
    let values: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<_, _>>()?;
    let count = values.len();
    let array: [f64; N] =
        values.try_into().map_err(|_| format!("expected {N} comma-separated numbers, got {count}"))?;
    if array.iter().all(|x| x.is_finite()) {
        Ok(array)
    } else {
        Err("components must be finite".to_owned())
    }
}

fn parse_vector(text: &str) -> Result<Vector3, String> {
    parse_numbers::<3>(text).map(|[x, y, z]| Vector3::new(x, y, z))
}

fn parse_angles(text: &str) -> Result<[f64; 4], String> {
    parse_numbers::<4>(text)
}

/// Runs the tool with `BEABLES_SEED` read from the process environment.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    run_with_env(args, env_seed.as_deref(), stdout, stderr)
}

/// Runs the tool with an explicit value for `BEABLES_SEED`.
pub fn run_with_env<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_VALIDATION,
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli, env_seed, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let mut config = match &cli.config {
        Some(path) => {
            let loaded = load_config(path)?;
            for warning in &loaded.warnings {
                let _ = writeln!(stderr, "warning: {warning}");
            }
            loaded.config
        }
        None => ExperimentConfig::default(),
    };
    if let Some(text) = env_seed {
        config.seed = text
            .trim()
            .parse()
            .map_err(|_| CliError::field(SEED_ENV, format!("`{text}` is not a nonnegative integer")))?;
    }
    let outcome = commands::dispatch(cli.command, config)?;
    report::emit(&outcome.manifest, &outcome.body, cli.out.as_deref(), stdout)?;
    if let Some(e) = &outcome.failure {
        let _ = writeln!(stderr, "error: {e}");
        return Ok(e.exit_code());
    }
    Ok(EXIT_OK)
}
