//! Command-line harness for the `charlier` crate.
//!
//! Four subcommands: `eval` (one value), `compare` (error tables against the
//! oracle), `regionmap` (zone grid for heat maps) and `zeros` (zero atlas).
//! Tables go out as CSV, or as one JSON document with `--json`.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 flag errors,
//! 3 formula precondition violated, 4 incomplete zero scan.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

mod commands;
pub mod literature;
pub mod point;
pub mod table;

pub use literature::Against;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("zero scan incomplete: found {found} of {expected} zeros")]
    IncompleteScan { found: usize, expected: usize },
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::IncompleteScan { .. } => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "charlier", version, about = "Charlier polynomials: oracle values, asymptotic forms, region maps and zeros")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value of C_n at one or more points.
    Eval(EvalArgs),
    /// Relative error of asymptotic forms against the oracle.
    Compare(CompareArgs),
    /// Zone, primary form and alternates over a rectangle in y.
    Regionmap(RegionmapArgs),
    /// Real zeros of C_n, with predictions or a density histogram.
    Zeros(ZerosArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Poisson parameter, a > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    /// Starting precision of the oracle.
    #[arg(long = "precision-bits", default_value_t = 256)]
    pub precision_bits: usize,
    /// Print one JSON document instead of CSV / text.
    #[arg(long)]
    pub json: bool,
    /// Also write the table as CSV to this path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Permit oracle evaluations with n > 2000.
    #[arg(long = "allow-slow")]
    pub allow_slow: bool,
}

/// Points as comma lists of numbers, `re+imi` values or `lo:hi:count` ranges.
#[derive(Debug, Clone, Default, Args)]
#[group(multiple = false)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// y = x/n.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// t = (x - n)/sqrt(n).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// t = 2 sqrt(a) cos(theta).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Degree, or a comma list of degrees.
    #[arg(long)]
    pub n: String,
    #[command(flatten)]
    pub points: PointArgs,
    /// A formula tag, `auto` for the router's choice, or `oracle` (default).
    #[arg(long)]
    pub formula: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: String,
    #[command(flatten)]
    pub points: PointArgs,
    /// Comma list of formula tags, `auto` or `oracle`.
    #[arg(long, default_value = "auto")]
    pub formula: String,
    /// Add columns for an earlier leading-order form; without points, uses s = 0.
    #[arg(long, value_enum)]
    pub against: Option<Against>,
}

#[derive(Debug, Clone, Args)]
pub struct RegionmapArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long = "re-min", default_value_t = -2.0, allow_hyphen_values = true)]
    pub re_min: f64,
    #[arg(long = "re-max", default_value_t = 3.0, allow_hyphen_values = true)]
    pub re_max: f64,
    #[arg(long = "im-min", default_value_t = -1.5, allow_hyphen_values = true)]
    pub im_min: f64,
    #[arg(long = "im-max", default_value_t = 1.5, allow_hyphen_values = true)]
    pub im_max: f64,
    #[arg(long, default_value_t = 200)]
    pub nx: usize,
    #[arg(long, default_value_t = 200)]
    pub ny: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: String,
    /// Scan start; defaults to a full scan from below 0.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    /// Scan end; defaults to above the largest zero.
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    /// Add predicted positions, gaps and the integer offsets.
    #[arg(long, conflicts_with = "density")]
    pub predictions: bool,
    /// Emit the histogram of zeros/n over [0, 1] instead of the zeros.
    #[arg(long)]
    pub density: bool,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
}

/// Grid cells `regionmap` accepts.
pub const MAX_GRID_POINTS: usize = 1_000_000;
/// Largest degree the oracle runs at without `--allow-slow`.
pub const SLOW_DEGREE: usize = 2000;

/// Runs one subcommand, writing stdout output to `out`.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let (common, table, text) = match &cli.command {
        Command::Eval(args) => {
            let (table, text) = commands::eval(args)?;
            (&args.common, table, Some(text))
        }
        Command::Compare(args) => (&args.common, commands::compare(args)?, None),
        Command::Regionmap(args) => (&args.common, commands::regionmap(args)?, None),
        Command::Zeros(args) => (&args.common, commands::zeros(args)?, None),
    };
    if let Some(path) = &common.csv {
        let file = std::fs::File::create(path).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        table.write_csv(std::io::BufWriter::new(file))?;
    }
    let written = if common.json {
        serde_json::to_writer_pretty(&mut *out, &table.to_json()).map_err(|e| CliError::Failure(e.to_string()))?;
        writeln!(out)
    } else if let Some(text) = text {
        out.write_all(text.as_bytes())
    } else if common.csv.is_none() {
        return table.write_csv(out);
    } else {
        Ok(())
    };
    written.map_err(|e| CliError::Failure(e.to_string()))
}
