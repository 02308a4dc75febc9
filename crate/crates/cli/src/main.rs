mod commands;
mod instance;
mod json;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use canonpos_core::{Error, Tolerance};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::commands::Context;
use crate::instance::Instance;
use crate::json::{real, Obj};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-domain input; exit code 2.
    Invalid(String),
    /// A singular or degenerate computation; exit code 3.
    Numerical(String),
}

impl CliError {
    pub fn context(self, what: &str) -> Self {
        match self {
            Self::Invalid(m) => Self::Invalid(format!("{what}: {m}")),
            Self::Numerical(m) => Self::Numerical(format!("{what}: {m}")),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Self::Invalid(_) => 2,
            Self::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Invalid(m) | Self::Numerical(m) => m,
        }
    }

    fn category(&self) -> &'static str {
        match self {
            Self::Invalid(_) => "invalid_input",
            Self::Numerical(_) => "numerical",
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } => {
                Self::Invalid(e.to_string())
            }
            other => Self::Numerical(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "canonpos",
    version,
    about = "Positivity of complex canonical transformations on quadratic weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levi form, pluriharmonic split and polarization of a weight.
    Weight(Common),
    /// Positivity of a complex Lagrangian plane relative to a weight.
    Lagrangian(Common),
    /// Positivity of a canonical map relative to a pair of weights.
    Map(Common),
    /// Kernel phase, image weight and domination for a Fourier integral operator.
    Fio(Common),
    /// Weyl symbol, canonical map and boundedness of a Gaussian Toeplitz operator.
    Toeplitz(Common),
    /// Truncated-matrix oracle for a one-dimensional Toeplitz operator.
    Validate {
        #[command(flatten)]
        common: Common,
        /// A toeplitz report (JSON) whose claims are checked against the oracle.
        #[arg(long)]
        prior: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Instance file.
    instance: PathBuf,
    /// Relative tolerance for positivity decisions [default: 1e-9].
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for spot checks at random points [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation order for the validate oracle [default: 40].
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Add wall-clock timings to the report.
    #[arg(long)]
    timing: bool,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn execute(kind: &str, common: &Common, prior: Option<&PathBuf>) -> Result<Value, CliError> {
    let inst = Instance::parse(&read(&common.instance)?)?;
    if let Some(k) = &inst.kind {
        if k != kind {
            return Err(CliError::Invalid(format!(
                "instance is of kind `{k}` but the subcommand is `{kind}`"
            )));
        }
    }
    let tol = common
        .tol
        .or(inst.options.tol)
        .unwrap_or(Tolerance::default().0);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Invalid("--tol must be a positive number".into()));
    }
    let seed = common.seed.or(inst.options.seed).unwrap_or(42);
    let truncation = common.truncation.or(inst.options.truncation).unwrap_or(40);
    if truncation == 0 {
        return Err(CliError::Invalid("--truncation must be positive".into()));
    }
    let prior = match prior {
        Some(path) => Some(
            serde_json::from_str::<Value>(&read(path)?)
                .map_err(|e| CliError::Invalid(format!("prior report is not valid JSON: {e}")))?,
        ),
        None => None,
    };
    let ctx = Context {
        tol: Tolerance(tol),
        seed,
        truncation,
        prior,
    };

    let started = Instant::now();
    let mut report = Obj::new()
        .set("schema_version", SCHEMA_VERSION)
        .set("kind", kind)
        .set(
            "options",
            Obj::new()
                .set("tol", real(tol))
                .set("seed", seed)
                .set("truncation", truncation)
                .build(),
        );
    let mut timings = Vec::new();
    match &inst.sweep {
        None => {
            let t = Instant::now();
            report = report.set("result", commands::run(kind, &inst.payload, &ctx)?);
            timings.push(t.elapsed().as_secs_f64());
        }
        Some(items) => {
            let mut out = Vec::new();
            for (item, payload) in items.iter().zip(inst.payloads()) {
                let t = Instant::now();
                let entry = Obj::new().set("input", Value::Object(item.clone()));
                let entry = match commands::run(kind, &payload, &ctx) {
                    Ok(r) => entry.set("result", r),
                    Err(e) => entry.set(
                        "error",
                        Obj::new()
                            .set("category", e.category())
                            .set("message", e.message())
                            .build(),
                    ),
                };
                timings.push(t.elapsed().as_secs_f64());
                out.push(entry.build());
            }
            report = report.set("sweep", out);
        }
    }
    if common.timing {
        report = report.set(
            "timing",
            Obj::new()
                .set("total_seconds", real(started.elapsed().as_secs_f64()))
                .set("per_item_seconds", json::reals(&timings))
                .build(),
        );
    }
    Ok(report.build())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common, prior) = match &cli.command {
        Command::Weight(c) => ("weight", c, None),
        Command::Lagrangian(c) => ("lagrangian", c, None),
        Command::Map(c) => ("map", c, None),
        Command::Fio(c) => ("fio", c, None),
        Command::Toeplitz(c) => ("toeplitz", c, None),
        Command::Validate { common, prior } => ("validate", common, prior.as_ref()),
    };
    match execute(kind, common, prior) {
        Ok(report) => {
            let out = match common.format {
                Format::Json => json::to_canonical(&report),
                Format::Text => text::render(&report),
            };
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("canonpos {kind}: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
