//! Dual-mode scalar arithmetic and the dense linear algebra built on it.
//!
//! Every geometric quantity in this crate (coordinates, squared distances,
//! convex coefficients, LP tableau entries) is generic over [`Scalar`]. Two
//! implementations are provided: [`num_rational::BigRational`] for exact
//! arithmetic and `f64` for tolerance-based floating point. Exact mode is the
//! contract-bearing mode; float mode exists for plotting and finite-difference
//! checks and is unsound for adversarial inputs.

mod linalg;
mod point;
mod scalar;

pub use linalg::{rank_and_basis, solve_linear, LinAlgError, Matrix, SpanBasis};
pub use point::{Point, Vector};
pub use scalar::{Scalar, ScalarParseError, Sign, Tolerance};
