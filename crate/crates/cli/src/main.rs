//! `scourbench` command-line front end.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Bad flags, config or equation names. Exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Debug, Parser)]
#[command(name = "scourbench", version, about = "Bridge-pier scour equations: prediction, accuracy and sensitivity analysis")]
pub struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a CSV export and write the canonical dataset.
    Ingest(IngestArgs),
    /// Evaluate one equation for inline inputs.
    Predict(PredictArgs),
    /// Score equations against measured scour depths.
    Accuracy(AccuracyArgs),
    /// Fit candidate distributions to every measured parameter.
    Fit(FitArgs),
    /// One-at-a-time sensitivity around the mean baseline.
    Oat(OatArgs),
    /// PAWN global sensitivity analysis.
    Gsa(GsaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// lab or field.
    #[arg(long)]
    pub source: Option<String>,
    /// Canonical dataset file (default: <data dir>/<source>.csv).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Directory holding lab.csv and field.csv.
    #[arg(long, env = "SCOURBENCH_DATA_DIR")]
    pub data_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// CSV export following the column schema.
    #[arg(long)]
    pub input: PathBuf,
    /// lab or field.
    #[arg(long)]
    pub source: Option<String>,
    /// Companion table with id, pier_length_m and measurement_method.
    #[arg(long)]
    pub lengths: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Equation name (ciria, tamu, hec18, melville, froehlich,
    /// melville-sutherland, chitale, laursen).
    #[arg(long)]
    pub equation: String,
    /// Pier width (m).
    #[arg(long = "B")]
    pub b: Option<f64>,
    /// Pier length (m).
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Approach flow depth (m).
    #[arg(long = "y1")]
    pub y1: Option<f64>,
    /// Approach velocity (m/s).
    #[arg(long = "V1")]
    pub v1: Option<f64>,
    /// Critical velocity (m/s).
    #[arg(long = "Vc")]
    pub vc: Option<f64>,
    /// Angle of attack (degrees).
    #[arg(long = "theta")]
    pub theta: Option<f64>,
    /// Median grain size (mm).
    #[arg(long = "D50")]
    pub d50: Option<f64>,
    /// Shape tag or a continuous factor in [0.9, 2].
    #[arg(long = "shape")]
    pub shape: Option<String>,
    /// Pier spacing (m).
    #[arg(long = "S")]
    pub s: Option<f64>,
    /// Directory of factor tables to use instead of the built-in ones.
    #[arg(long)]
    pub factors: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AccuracyArgs {
    /// Equation name, comma-separated list, or "all".
    #[arg(long)]
    pub equation: Option<String>,
    #[command(flatten)]
    pub data: DataArgs,
    /// all, le2m (measured depth at most 2 m), lab or field.
    #[arg(long)]
    pub subset: Option<String>,
    /// Imputed pier length as a multiple of B.
    #[arg(long)]
    pub length_ratio: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct OatArgs {
    /// Equation name, comma-separated list, or "all".
    #[arg(long)]
    pub equation: Option<String>,
    /// lab or field.
    #[arg(long)]
    pub source: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GsaArgs {
    /// Equation name, comma-separated list, or "all".
    #[arg(long)]
    pub equation: Option<String>,
    #[command(flatten)]
    pub data: DataArgs,
    /// Random seed (required).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample size.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Conditioning intervals per input.
    #[arg(long)]
    pub intervals: Option<usize>,
    /// Bootstrap resamples.
    #[arg(long)]
    pub resamples: Option<usize>,
    /// published or fitted (refit on the dataset).
    #[arg(long)]
    pub marginals: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use scourbench::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Config(_) | E::IncompleteInputs { .. } => 2,
                E::Schema { .. } | E::EmptyParameter(_) | E::FactorTable { .. } | E::Io(_) | E::Csv(_) | E::Json(_) => 3,
                E::Domain(_) | E::Fit { .. } | E::DegenerateBaseline(_) | E::SparseBin { .. } => 4,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    4
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
