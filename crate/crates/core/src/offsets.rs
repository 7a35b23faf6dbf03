//! Behavioral verification of the classification through offset homology.
//!
//! The offset `d_X <= t` is a union of balls; its Čech nerve (a simplex per
//! subset whose smallest enclosing ball has squared radius `<= t^2`) is
//! homotopy-equivalent to it. Sampling Betti numbers between consecutive
//! critical values and differencing across them checks, entirely by brute
//! force, that homotopy type changes exactly where the classification says
//! it must and in the way handle attachment allows.
//!
//! Everything runs in squared scale: critical values are square roots of
//! rationals and are never materialized as floats in exact mode.

use std::collections::HashMap;

use thiserror::Error;

use crate::convex::min_enclosing_ball;
use crate::morse::{Classification, CriticalPointRecord, PointCloud, RegularReason};
use crate::num::{Point, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("record {index} does not belong to this cloud: {reason}")]
    RecordMismatch { index: usize, reason: String },
    #[error("simplices of dimension {dim} are not sorted and face-closed")]
    MalformedComplex { dim: usize },
}

/// An abstract simplicial complex on `{0, .., vertices-1}`, stored by
/// dimension as lexicographically sorted, strictly increasing vertex tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: usize,
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Validating constructor: every tuple strictly increasing, every level
    /// sorted and duplicate-free, every facet present one level down.
    pub fn new(vertices: usize, simplices: Vec<Vec<Vec<usize>>>) -> Result<Self, VerifyError> {
        for (dim, level) in simplices.iter().enumerate() {
            for s in level {
                let increasing = s.len() == dim + 1
                    && s.windows(2).all(|w| w[0] < w[1])
                    && s.iter().all(|&v| v < vertices);
                if !increasing {
                    return Err(VerifyError::MalformedComplex { dim });
                }
            }
            if level.windows(2).any(|w| w[0] >= w[1]) {
                return Err(VerifyError::MalformedComplex { dim });
            }
            if dim > 0 {
                let below = &simplices[dim - 1];
                for s in level {
                    for drop in 0..s.len() {
                        let facet: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != drop)
                            .map(|(_, &v)| v)
                            .collect();
                        if below.binary_search(&facet).is_err() {
                            return Err(VerifyError::MalformedComplex { dim });
                        }
                    }
                }
            }
        }
        Ok(SimplicialComplex {
            vertices,
            simplices,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn max_dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn simplex_count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    /// True when every simplex of `self` appears in `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().enumerate().all(|(d, level)| {
            level
                .iter()
                .all(|s| other.simplices(d).binary_search(s).is_ok())
        })
    }

    /// Boundary operator from `dim`-chains to `(dim-1)`-chains over Z/2.
    fn boundary_matrix(&self, dim: usize) -> Gf2Matrix {
        assert!(dim >= 1);
        let rows = self.simplex_count(dim - 1);
        let below = self.simplices(dim - 1);
        let mut matrix = Gf2Matrix::new(rows, self.simplex_count(dim));
        for (j, s) in self.simplices(dim).iter().enumerate() {
            for drop in 0..s.len() {
                let facet: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let row = below
                    .binary_search(&facet)
                    .expect("face-closed by construction");
                matrix.flip(row, j);
            }
        }
        matrix
    }
}

/// Columns of bit-packed Z/2 entries.
struct Gf2Matrix {
    words: usize,
    cols: Vec<Vec<u64>>,
}

impl Gf2Matrix {
    fn new(rows: usize, ncols: usize) -> Self {
        let words = rows.div_ceil(64).max(1);
        Gf2Matrix {
            words,
            cols: vec![vec![0u64; words]; ncols],
        }
    }

    fn flip(&mut self, row: usize, col: usize) {
        self.cols[col][row / 64] ^= 1u64 << (row % 64);
    }

    fn lowest_one(col: &[u64]) -> Option<usize> {
        for (w, &word) in col.iter().enumerate().rev() {
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    /// Rank over Z/2 by column reduction against stored pivot columns.
    fn rank(mut self) -> usize {
        let mut pivot_col_of_row: HashMap<usize, usize> = HashMap::new();
        let mut rank = 0;
        for j in 0..self.cols.len() {
            while let Some(low) = Self::lowest_one(&self.cols[j]) {
                match pivot_col_of_row.get(&low) {
                    Some(&k) => {
                        let (a, b) = if k < j {
                            let (left, right) = self.cols.split_at_mut(j);
                            (&left[k], &mut right[0])
                        } else {
                            unreachable!("pivot columns precede the reduced column")
                        };
                        for (dst, src) in b.iter_mut().zip(a) {
                            *dst ^= *src;
                        }
                    }
                    None => {
                        pivot_col_of_row.insert(low, j);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        let _ = self.words;
        rank
    }

    /// `self * other` over Z/2 (used to check that consecutive boundary
    /// operators compose to zero).
    #[cfg(test)]
    fn compose_is_zero(&self, other: &Gf2Matrix) -> bool {
        // columns of the product: XOR of self-columns picked by other's bits
        for col in &other.cols {
            let mut acc = vec![0u64; self.words];
            for (w, &word) in col.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let idx = w * 64 + b;
                    for (dst, src) in acc.iter_mut().zip(&self.cols[idx]) {
                        *dst ^= *src;
                    }
                }
            }
            if acc.iter().any(|&w| w != 0) {
                return false;
            }
        }
        true
    }
}

/// The Čech nerve of the cloud at squared radius `squared_t`: a simplex on a
/// vertex subset iff the subset's smallest enclosing ball has squared radius
/// `<= squared_t` (inclusive, matching closed offsets). Built incrementally
/// by dimension up to `max_dim`; comparisons are exact in exact mode.
pub fn cech_complex<S: Scalar>(
    cloud: &PointCloud<S>,
    squared_t: &S,
    max_dim: usize,
) -> SimplicialComplex {
    assert!(!squared_t.is_negative(), "squared radius must be >= 0");
    let n_points = cloud.len();
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..n_points).map(|i| vec![i]).collect()];
    for dim in 1..=max_dim {
        let prev = &levels[dim - 1];
        let mut level: Vec<Vec<usize>> = Vec::new();
        for s in prev {
            let last = *s.last().expect("nonempty simplex");
            for v in last + 1..n_points {
                let mut candidate = s.clone();
                candidate.push(v);
                // All facets must already be present (cheap filter before
                // the miniball predicate). Dropping the last vertex gives
                // `s` itself.
                let closed = (0..candidate.len() - 1).all(|drop| {
                    let facet: Vec<usize> = candidate
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != drop)
                        .map(|(_, &u)| u)
                        .collect();
                    prev.binary_search(&facet).is_ok()
                });
                if !closed {
                    continue;
                }
                let members: Vec<Point<S>> =
                    candidate.iter().map(|&i| cloud.point(i).clone()).collect();
                let ball = min_enclosing_ball(&members);
                if ball.squared_radius.le_tol(squared_t, cloud.tolerance()) {
                    level.push(candidate);
                }
            }
        }
        if level.is_empty() {
            break;
        }
        levels.push(level);
    }
    SimplicialComplex {
        vertices: n_points,
        simplices: levels,
    }
}

/// Betti numbers over Z/2 via boundary-matrix column reduction:
/// `β_k = #k-simplices - rank ∂_k - rank ∂_{k+1}`.
pub fn betti(complex: &SimplicialComplex) -> Vec<usize> {
    let top = complex.max_dim();
    let ranks: Vec<usize> = (1..=top)
        .map(|d| complex.boundary_matrix(d).rank())
        .collect();
    (0..=top)
        .map(|k| {
            let rank_k = if k == 0 { 0 } else { ranks[k - 1] };
            let rank_k1 = if k == top { 0 } else { ranks[k] };
            let b = complex.simplex_count(k) as i64 - rank_k as i64 - rank_k1 as i64;
            assert!(b >= 0, "negative Betti number: broken reduction");
            b as usize
        })
        .collect()
}

/// One sampled open interval between consecutive critical values.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSample<S> {
    pub squared_radius: S,
    /// `β_0 .. β_n` of the offset at the sampled radius.
    pub betti: Vec<usize>,
}

/// Checks across one topological critical squared value.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingCheck<S> {
    pub squared_value: S,
    pub delta_betti: Vec<i64>,
    pub delta_euler: i64,
    /// `Σ (-1)^m` over the topological critical records at this value.
    pub expected_euler: i64,
    /// Handle bookkeeping: `Δχ` equals the expected signed count.
    pub euler_matches: bool,
    /// When exactly one record crosses here: the change is a single handle
    /// (`β_m += 1` or `β_{m-1} -= 1`, everything else unchanged).
    pub single_handle: Option<bool>,
}

/// Isotopy check around a differential-critical-but-regular value.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularValueCheck<S> {
    pub squared_value: S,
    pub betti_before: Vec<usize>,
    pub betti_after: Vec<usize>,
    pub unchanged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminalCheck {
    pub betti: Vec<usize>,
    /// The offset far beyond the last critical value is contractible.
    pub contractible: bool,
}

/// Full report of the Morse-consistency rules over the offset filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetVerificationReport<S> {
    pub ambient: usize,
    /// Distinct topological critical squared values, ascending (0 first).
    pub critical_squared_values: Vec<S>,
    pub intervals: Vec<IntervalSample<S>>,
    pub crossings: Vec<CrossingCheck<S>>,
    pub regular_checks: Vec<RegularValueCheck<S>>,
    pub terminal: TerminalCheck,
    pub all_passed: bool,
}

fn euler(betti: &[usize]) -> i64 {
    betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum()
}

fn push_distinct<S: Scalar>(values: &mut Vec<S>, v: &S) {
    if !values.iter().any(|w| w == v) {
        values.push(v.clone());
    }
}

/// Verifies the enumerated records against brute-force offset homology.
///
/// Rules checked:
/// - R1 (isotopy): Betti vectors are unchanged across any differential
///   critical value all of whose records are topologically regular.
/// - R2 (handle bookkeeping): across each topological critical value,
///   `Δχ = Σ (-1)^m` over the records crossing there (index-0 records at
///   value 0 seed `β_0 = |X|`).
/// - R3 (single handle): an isolated crossing of index `m` changes exactly
///   one Betti number, by one, in position `m` (up) or `m-1` (down).
/// - R4 (terminal contractibility): beyond the last critical value the
///   offset has the homology of a point.
pub fn verify_morse_consistency<S: Scalar>(
    cloud: &PointCloud<S>,
    records: &[CriticalPointRecord<S>],
) -> Result<OffsetVerificationReport<S>, VerifyError> {
    let n = cloud.ambient();
    for (index, record) in records.iter().enumerate() {
        if record.location.dim() != n {
            return Err(VerifyError::RecordMismatch {
                index,
                reason: "location dimension differs from the cloud".into(),
            });
        }
        let recomputed = cloud.squared_distance(&record.location);
        if !recomputed.eq_tol(&record.squared_value, cloud.tolerance()) {
            return Err(VerifyError::RecordMismatch {
                index,
                reason: "stored squared value is not the distance to the cloud".into(),
            });
        }
        if record.classification == Classification::CriticalIndexZero
            && cloud.position_of(&record.location).is_none()
        {
            return Err(VerifyError::RecordMismatch {
                index,
                reason: "index-0 record is not a cloud point".into(),
            });
        }
    }

    let mut critical_values: Vec<S> = Vec::new();
    let mut regular_values: Vec<S> = Vec::new();
    for record in records {
        if record.classification.is_topological_critical() {
            push_distinct(&mut critical_values, &record.squared_value);
        } else if matches!(
            record.classification,
            Classification::Regular(RegularReason::CertificateExists { .. })
        ) {
            push_distinct(&mut regular_values, &record.squared_value);
        }
    }
    critical_values.sort_by(|a, b| a.total_cmp(b));
    regular_values.retain(|v| !critical_values.contains(v));
    regular_values.sort_by(|a, b| a.total_cmp(b));

    let beyond_all = {
        let max = critical_values
            .iter()
            .chain(regular_values.iter())
            .max_by(|a, b| a.total_cmp(b))
            .expect("records include the cloud points at value 0");
        max.clone() + S::one()
    };

    let two = S::from_int(2);
    let betti_at = |squared_radius: &S| -> Vec<usize> {
        let complex = cech_complex(cloud, squared_radius, n + 1);
        let mut b = betti(&complex);
        // Report exactly beta_0 .. beta_n of the offset. The complex was
        // built one dimension higher so that beta_n is already correct.
        b.truncate(n + 1);
        b.resize(n + 1, 0);
        b
    };

    // One sample strictly inside each open interval between consecutive
    // topological critical values, plus one beyond everything.
    let mut intervals = Vec::new();
    for (j, v) in critical_values.iter().enumerate() {
        let squared_radius = match critical_values.get(j + 1) {
            Some(next) => (v.clone() + next.clone()) / two.clone(),
            None => beyond_all.clone(),
        };
        let betti = betti_at(&squared_radius);
        intervals.push(IntervalSample {
            squared_radius,
            betti,
        });
    }

    let empty = vec![0usize; n + 1];
    let mut crossings = Vec::new();
    for (j, v) in critical_values.iter().enumerate() {
        let before = if j == 0 {
            &empty
        } else {
            &intervals[j - 1].betti
        };
        let after = &intervals[j].betti;
        let delta_betti: Vec<i64> = after
            .iter()
            .zip(before)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect();
        let delta_euler = euler(after) - euler(before);
        let crossing_records: Vec<&CriticalPointRecord<S>> = records
            .iter()
            .filter(|r| r.classification.is_topological_critical() && r.squared_value == *v)
            .collect();
        let expected_euler: i64 = crossing_records
            .iter()
            .map(|r| {
                let m = r.classification.index().expect("topological critical");
                if m % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .sum();
        let single_handle = if crossing_records.len() == 1 {
            let m = crossing_records[0]
                .classification
                .index()
                .expect("topological critical");
            let ok = delta_betti.iter().enumerate().all(|(k, &d)| {
                if k == m {
                    d == 1 || d == 0
                } else if m >= 1 && k == m - 1 {
                    d == -1 || d == 0
                } else {
                    d == 0
                }
            }) && {
                let up = delta_betti[m] == 1;
                let down = m >= 1 && delta_betti[m - 1] == -1;
                up != down
            };
            Some(ok)
        } else {
            None
        };
        crossings.push(CrossingCheck {
            squared_value: v.clone(),
            delta_betti,
            delta_euler,
            expected_euler,
            euler_matches: delta_euler == expected_euler,
            single_handle,
        });
    }

    // R1: straddle every purely-regular differential critical value with
    // extra samples, avoiding all other recorded values.
    let mut all_values: Vec<S> = critical_values
        .iter()
        .chain(regular_values.iter())
        .cloned()
        .collect();
    all_values.sort_by(|a, b| a.total_cmp(b));
    let mut regular_checks = Vec::new();
    for w in &regular_values {
        let prev = all_values
            .iter()
            .filter(|v| v.total_cmp(w) == std::cmp::Ordering::Less)
            .max_by(|a, b| a.total_cmp(b))
            .expect("value 0 is always below a regular value");
        let next = all_values
            .iter()
            .filter(|v| v.total_cmp(w) == std::cmp::Ordering::Greater)
            .min_by(|a, b| a.total_cmp(b));
        let before_radius = (prev.clone() + w.clone()) / two.clone();
        let after_radius = match next {
            Some(next) => (w.clone() + next.clone()) / two.clone(),
            None => w.clone() + S::one(),
        };
        let betti_before = betti_at(&before_radius);
        let betti_after = betti_at(&after_radius);
        let unchanged = betti_before == betti_after;
        regular_checks.push(RegularValueCheck {
            squared_value: w.clone(),
            betti_before,
            betti_after,
            unchanged,
        });
    }

    let terminal_betti = intervals
        .last()
        .map(|s| s.betti.clone())
        .expect("at least the interval beyond value 0 exists");
    let mut contractible_model = vec![0usize; n + 1];
    contractible_model[0] = 1;
    let terminal = TerminalCheck {
        contractible: terminal_betti == contractible_model,
        betti: terminal_betti,
    };

    let all_passed = crossings
        .iter()
        .all(|c| c.euler_matches && c.single_handle != Some(false))
        && regular_checks.iter().all(|r| r.unchanged)
        && terminal.contractible;

    Ok(OffsetVerificationReport {
        ambient: n,
        critical_squared_values: critical_values,
        intervals,
        crossings,
        regular_checks,
        terminal,
        all_passed,
    })
}
