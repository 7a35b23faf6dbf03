//! Point cloud CSV loading: one point per line, coordinates comma-separated,
//! each an integer, a fraction `p/q`, or a decimal. Blank lines and lines
//! starting with `#` are ignored.

use std::path::Path;

use distmorse::morse::{CloudError, PointCloud};
use distmorse::num::{Point, Scalar, ScalarParseError, Tolerance};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    BadCoordinate {
        path: String,
        line: usize,
        source: ScalarParseError,
    },
    #[error("{path}:{line}: row has {found} coordinates, expected {expected}")]
    RaggedRow {
        path: String,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}: duplicate points at lines {first} and {second}")]
    DuplicatePoints {
        path: String,
        first: usize,
        second: usize,
    },
    #[error("{path}: no data rows")]
    Empty { path: String },
}

/// Parses a comma-separated coordinate list (used for `--at` queries).
pub fn parse_point<S: Scalar>(text: &str) -> Result<Point<S>, ScalarParseError> {
    let coords = text
        .split(',')
        .map(|field| S::parse_literal(field.trim()))
        .collect::<Result<Vec<S>, _>>()?;
    if coords.is_empty() {
        return Err(ScalarParseError::Malformed(text.to_owned()));
    }
    Ok(Point::new(coords))
}

pub fn load_point_cloud<S: Scalar>(
    path: &Path,
    tolerance: Tolerance,
) -> Result<PointCloud<S>, LoadError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Read {
        path: display.clone(),
        source,
    })?;
    let mut points: Vec<Point<S>> = Vec::new();
    let mut line_numbers: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let coords = row
            .split(',')
            .map(|field| S::parse_literal(field.trim()))
            .collect::<Result<Vec<S>, _>>()
            .map_err(|source| LoadError::BadCoordinate {
                path: display.clone(),
                line,
                source,
            })?;
        if let Some(first) = points.first() {
            if coords.len() != first.dim() {
                return Err(LoadError::RaggedRow {
                    path: display,
                    line,
                    expected: first.dim(),
                    found: coords.len(),
                });
            }
        }
        points.push(Point::new(coords));
        line_numbers.push(line);
    }
    PointCloud::with_tolerance(points, tolerance).map_err(|e| match e {
        CloudError::Empty => LoadError::Empty { path: display },
        CloudError::Duplicate { first, second } => LoadError::DuplicatePoints {
            path: display,
            first: line_numbers[first],
            second: line_numbers[second],
        },
        CloudError::DimensionMismatch { index, .. } => LoadError::RaggedRow {
            path: display,
            line: line_numbers[index],
            expected: 0,
            found: 0,
        },
    })
}
