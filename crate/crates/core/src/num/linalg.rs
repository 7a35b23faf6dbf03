use thiserror::Error;

use super::point::{Point, Vector};
use super::scalar::{Scalar, Tolerance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: matrix has {rows} rows, vector has {len} entries")]
    DimensionMismatch { rows: usize, len: usize },
    #[error("rows have inconsistent lengths")]
    RaggedRows,
}

/// Dense row-major matrix over one scalar mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: Vec<Vec<S>>,
    cols: usize,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinAlgError::RaggedRows);
        }
        Ok(Matrix { rows, cols })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows: vec![vec![S::zero(); cols]; rows],
            cols,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.rows[i][j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.rows[i]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

/// A basis of the linear span of a set of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanBasis<S> {
    ambient: usize,
    basis: Vec<Vector<S>>,
}

impl<S: Scalar> SpanBasis<S> {
    /// Rank of the spanned subspace.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }
}

/// Float-mode pivot threshold: entries at or below it count as zero. The
/// scale is the largest magnitude seen in the input matrix.
fn pivot_threshold(scale: f64, tol: &Tolerance) -> f64 {
    tol.abs.max(tol.rel * scale)
}

/// Rank and a spanning basis via row reduction: fraction-free (Bareiss)
/// elimination in exact mode, partial pivoting with a tolerance threshold in
/// float mode. Deterministic given the input order. Empty input yields the
/// zero-dimensional basis.
pub fn rank_and_basis<S: Scalar>(vectors: &[Vector<S>]) -> SpanBasis<S> {
    let ambient = vectors.first().map_or(0, Point::dim);
    assert!(
        vectors.iter().all(|v| v.dim() == ambient),
        "dimension mismatch"
    );
    let mut m: Vec<Vec<S>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    let n_rows = m.len();
    let tol = Tolerance::default();
    let scale = m
        .iter()
        .flatten()
        .map(|x| x.to_f64().abs())
        .fold(0.0f64, f64::max);
    let threshold = pivot_threshold(scale, &tol);
    let is_zero = |x: &S| {
        if S::EXACT {
            x.is_zero()
        } else {
            x.to_f64().abs() <= threshold
        }
    };

    let mut rank = 0;
    let mut prev_pivot = S::one();
    for col in 0..ambient {
        if rank == n_rows {
            break;
        }
        let pivot_row = if S::EXACT {
            (rank..n_rows).find(|&r| !is_zero(&m[r][col]))
        } else {
            (rank..n_rows)
                .filter(|&r| !is_zero(&m[r][col]))
                .max_by(|&a, &b| {
                    m[a][col]
                        .abs()
                        .to_f64()
                        .partial_cmp(&m[b][col].abs().to_f64())
                        .unwrap()
                })
        };
        let Some(pivot_row) = pivot_row else { continue };
        m.swap(rank, pivot_row);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let lead = row[col].clone();
            if S::EXACT {
                // Bareiss step: exact division by the previous pivot keeps
                // intermediate entries as minor determinants.
                for (v, pv) in row.iter_mut().zip(&pivot).skip(col + 1) {
                    *v = (pivot[col].clone() * v.clone() - lead.clone() * pv.clone())
                        / prev_pivot.clone();
                }
            } else {
                let factor = lead / pivot[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot).skip(col + 1) {
                    *v = v.clone() - factor.clone() * pv.clone();
                }
            }
            row[col] = S::zero();
        }
        prev_pivot = pivot[col].clone();
        rank += 1;
    }

    SpanBasis {
        ambient,
        basis: m.into_iter().take(rank).map(Point::new).collect(),
    }
}

/// Solves `A x = b`, returning one solution when the system is consistent and
/// `None` otherwise. Exact mode decides consistency exactly; float mode uses
/// the default pivot tolerance. Free variables are set to zero.
pub fn solve_linear<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<Option<Vec<S>>, LinAlgError> {
    if a.n_rows() != b.len() {
        return Err(LinAlgError::DimensionMismatch {
            rows: a.n_rows(),
            len: b.len(),
        });
    }
    let (n_rows, n_cols) = (a.n_rows(), a.n_cols());
    let mut m: Vec<Vec<S>> = (0..n_rows)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();

    let tol = Tolerance::default();
    let scale = m
        .iter()
        .flatten()
        .map(|x| x.to_f64().abs())
        .fold(0.0f64, f64::max);
    let threshold = pivot_threshold(scale, &tol);
    let is_zero = |x: &S| {
        if S::EXACT {
            x.is_zero()
        } else {
            x.to_f64().abs() <= threshold
        }
    };

    // Forward elimination, remembering the pivot column of each pivot row.
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let pivot_row = if S::EXACT {
            (rank..n_rows).find(|&r| !is_zero(&m[r][col]))
        } else {
            (rank..n_rows)
                .filter(|&r| !is_zero(&m[r][col]))
                .max_by(|&x, &y| {
                    m[x][col]
                        .abs()
                        .to_f64()
                        .partial_cmp(&m[y][col].abs().to_f64())
                        .unwrap()
                })
        };
        let Some(pivot_row) = pivot_row else { continue };
        m.swap(rank, pivot_row);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone() / pivot[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot).skip(col) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
            row[col] = S::zero();
        }
        pivot_cols.push(col);
        rank += 1;
    }

    // Consistency: a zero row with nonzero right-hand side has no solution.
    for row in m.iter().skip(rank) {
        if !is_zero(&row[n_cols]) {
            return Ok(None);
        }
    }

    // Back substitution with free variables pinned to zero.
    let mut x = vec![S::zero(); n_cols];
    for r in (0..rank).rev() {
        let col = pivot_cols[r];
        let mut acc = m[r][n_cols].clone();
        for c in col + 1..n_cols {
            acc = acc - m[r][c].clone() * x[c].clone();
        }
        x[col] = acc / m[r][col].clone();
    }
    Ok(Some(x))
}
