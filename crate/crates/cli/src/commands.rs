//! Command implementations shared by the binary and the integration tests.

use std::path::PathBuf;

use distmorse::morse::{EnumerationOptions, MorseError, PointCloud};
use distmorse::num::{Scalar, Tolerance};
use distmorse::offsets::{verify_morse_consistency, VerifyError};
use distmorse::{Exact, Float};
use thiserror::Error;

use crate::io::{load_point_cloud, parse_point, LoadError};
use crate::plot::{render_svg, PlotOptions};
use crate::report::{analysis_report, gradient_report, to_json_string};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("{0}")]
    Enumeration(#[from] MorseError),
    #[error("{0}")]
    Verification(#[from] VerifyError),
    #[error("{0}")]
    Invalid(String),
}

/// Scalar mode selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// A finished command: the document to emit and the process exit code.
pub struct Outcome {
    pub document: String,
    pub exit_code: i32,
}

pub struct AnalyzeArgs {
    pub input: PathBuf,
    pub mode: Mode,
    pub tol: f64,
    pub max_subset: Option<usize>,
}

pub struct GradientArgs {
    pub input: PathBuf,
    pub mode: Mode,
    pub tol: f64,
    pub at: String,
}

pub struct VerifyArgs {
    pub input: PathBuf,
}

pub struct PlotArgs {
    pub input: PathBuf,
    pub grid: usize,
    pub levels: usize,
    pub bbox: Option<[f64; 4]>,
}

fn tolerance(tol: f64) -> Tolerance {
    Tolerance::relative(tol)
}

fn enumeration_options(max_subset: Option<usize>) -> EnumerationOptions {
    match max_subset {
        Some(cap) => EnumerationOptions::with_cap(cap),
        None => EnumerationOptions::default(),
    }
}

fn analyze_in_mode<S: Scalar>(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let cloud: PointCloud<S> = load_point_cloud(&args.input, tolerance(args.tol))?;
    let records = cloud.enumerate_critical(&enumeration_options(args.max_subset))?;
    let document = to_json_string(&analysis_report(&cloud, &records, None));
    Ok(Outcome {
        document,
        exit_code: 0,
    })
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    match args.mode {
        Mode::Exact => analyze_in_mode::<Exact>(args),
        Mode::Float => analyze_in_mode::<Float>(args),
    }
}

fn gradient_in_mode<S: Scalar>(args: &GradientArgs) -> Result<Outcome, CliError> {
    let cloud: PointCloud<S> = load_point_cloud(&args.input, tolerance(args.tol))?;
    let at = parse_point::<S>(&args.at)
        .map_err(|e| CliError::Invalid(format!("bad --at point: {e}")))?;
    if at.dim() != cloud.ambient() {
        return Err(CliError::Invalid(format!(
            "query point has dimension {}, cloud has dimension {}",
            at.dim(),
            cloud.ambient()
        )));
    }
    let gradient = cloud.generalized_gradient(&at);
    Ok(Outcome {
        document: to_json_string(&gradient_report(&gradient)),
        exit_code: 0,
    })
}

pub fn gradient(args: &GradientArgs) -> Result<Outcome, CliError> {
    match args.mode {
        Mode::Exact => gradient_in_mode::<Exact>(args),
        Mode::Float => gradient_in_mode::<Float>(args),
    }
}

/// Runs `analyze` and the offset-homology consistency rules, always in exact
/// mode; the exit code reports whether every rule passed.
pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let cloud: PointCloud<Exact> = load_point_cloud(&args.input, Tolerance::default())?;
    let records = cloud.enumerate_critical(&EnumerationOptions::default())?;
    let report = verify_morse_consistency(&cloud, &records)?;
    let document = to_json_string(&analysis_report(&cloud, &records, Some(&report)));
    Ok(Outcome {
        document,
        exit_code: if report.all_passed { 0 } else { 1 },
    })
}

pub fn plot(args: &PlotArgs) -> Result<Outcome, CliError> {
    let cloud: PointCloud<Float> = load_point_cloud(&args.input, Tolerance::default())?;
    if cloud.ambient() != 2 {
        return Err(CliError::Invalid(format!(
            "plotting requires planar clouds, input has dimension {}",
            cloud.ambient()
        )));
    }
    let records = cloud.enumerate_critical(&EnumerationOptions::default())?;
    let options = PlotOptions {
        grid: args.grid,
        levels: args.levels,
        bbox: args.bbox,
    };
    Ok(Outcome {
        document: render_svg(&cloud, &records, &options),
        exit_code: 0,
    })
}
