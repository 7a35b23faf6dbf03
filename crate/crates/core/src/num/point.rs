use std::cmp::Ordering;
use std::ops::Index;

use super::scalar::Scalar;

/// A point of R^n (equivalently a vector; the distinction is by role, not
/// representation). Coordinates all live in one scalar mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point<S> {
    coords: Vec<S>,
}

/// Role alias: displacement vectors such as `x - z` or a certificate
/// direction `v`.
pub type Vector<S> = Point<S>;

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        assert!(!coords.is_empty(), "points need dimension >= 1");
        Point { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Point::new(vec![S::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.coords.iter()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Vector<S> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        Point::new(
            self.coords
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        )
    }

    pub fn dot(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist_sq(&self, other: &Self) -> S {
        self.sub(other).norm_sq()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }

    /// Lexicographic order on coordinates; used for canonical record sorting.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl<S> Index<usize> for Point<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.coords[i]
    }
}
