//! Topological critical points of distance functions to finite point sets.
//!
//! Given a finite `X ⊂ R^n`, the distance function `d_X` is a topological
//! Morse function even when `X` is degenerate (cocircular, collinear,
//! symmetric). This crate classifies every point of `R^n` as a topological
//! critical point (with its index) or a topological regular point, enumerates
//! all differential critical points, and verifies the classification
//! behaviorally by computing the homology of the offsets `d_X <= t` through
//! Čech nerves.
//!
//! All geometry is generic over [`num::Scalar`]; use the [`Exact`] alias
//! (arbitrary-precision rationals) for contract-bearing results and [`Float`]
//! for plotting and finite-difference work.

pub mod convex;
pub mod lp;
pub mod morse;
pub mod num;
pub mod offsets;

pub use num::{Point, Scalar, Tolerance, Vector};

/// Exact-mode scalar: arbitrary-precision rational numbers.
pub type Exact = num_rational::BigRational;

/// Float-mode scalar: IEEE binary64.
pub type Float = f64;

pub type ExactPoint = Point<Exact>;
pub type FloatPoint = Point<Float>;

pub type ExactCloud = morse::PointCloud<Exact>;
pub type FloatCloud = morse::PointCloud<Float>;
