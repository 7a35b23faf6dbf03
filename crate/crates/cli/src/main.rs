use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use distmorse_cli::commands::{
    self, AnalyzeArgs, CliError, GradientArgs, Mode, Outcome, PlotArgs, VerifyArgs,
};

/// Critical points of the distance function to a finite point set:
/// exact classification, enumeration, offset-homology verification,
/// and level-set plots.
#[derive(Parser)]
#[command(name = "distmorse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(mode: ModeArg) -> Mode {
        match mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and classify all critical points, writing a JSON report.
    Analyze {
        /// Point cloud CSV (one point per line).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Relative tolerance for float-mode ties on squared distances.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Raise the enumeration cap on the cloud size (default 25).
        #[arg(long = "max-subset")]
        max_subset: Option<usize>,
        /// Report destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the generalized gradient of the distance function at a point.
    Gradient {
        #[arg(long)]
        input: PathBuf,
        /// Query point, comma-separated ("x,y,...").
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Analyze, then check the offsets' homology against the classification.
    /// Exits 0 only when every consistency rule passes.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render level sets of the distance function to an SVG (planar clouds).
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Samples per axis of the evaluation grid.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// Number of evenly spaced level lines.
        #[arg(long, default_value_t = 10)]
        levels: usize,
        /// "auto" or "min_x,min_y,max_x,max_y".
        #[arg(long, default_value = "auto")]
        bbox: String,
    },
}

fn parse_bbox(text: &str) -> Result<Option<[f64; 4]>, CliError> {
    if text == "auto" {
        return Ok(None);
    }
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Invalid(format!("bad --bbox {text:?}")))?;
    match <[f64; 4]>::try_from(parts) {
        Ok(bbox) if bbox[0] < bbox[2] && bbox[1] < bbox[3] => Ok(Some(bbox)),
        _ => Err(CliError::Invalid(format!("bad --bbox {text:?}"))),
    }
}

fn emit(outcome: Outcome, out: Option<&PathBuf>) -> Result<i32, CliError> {
    match out {
        Some(path) => std::fs::write(path, outcome.document)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", outcome.document),
    }
    Ok(outcome.exit_code)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze {
            input,
            mode,
            tol,
            max_subset,
            out,
        } => {
            let outcome = commands::analyze(&AnalyzeArgs {
                input,
                mode: mode.into(),
                tol,
                max_subset,
            })?;
            emit(outcome, out.as_ref())
        }
        Command::Gradient {
            input,
            at,
            mode,
            tol,
        } => {
            let outcome = commands::gradient(&GradientArgs {
                input,
                mode: mode.into(),
                tol,
                at,
            })?;
            emit(outcome, None)
        }
        Command::Verify { input, out } => {
            let outcome = commands::verify(&VerifyArgs { input })?;
            emit(outcome, out.as_ref())
        }
        Command::Plot {
            input,
            out,
            grid,
            levels,
            bbox,
        } => {
            let bbox = parse_bbox(&bbox)?;
            let outcome = commands::plot(&PlotArgs {
                input,
                grid,
                levels,
                bbox,
            })?;
            emit(outcome, Some(&out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
