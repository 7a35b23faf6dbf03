//! Convex-analysis primitives: hull membership, min-norm projection onto a
//! convex hull, the positive-spanning / certificate dichotomy, circumcenters
//! within affine hulls, and smallest enclosing balls.
//!
//! Degenerate inputs (affinely dependent, cocircular, collinear) are
//! first-class everywhere; nothing here assumes general position.

use thiserror::Error;

use crate::lp::{solve_lp, Constraint, LinearProgram, LpOutcome, Relation, VarBound};
use crate::num::{solve_linear, Matrix, Point, Scalar, Sign, Tolerance, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvexError {
    #[error("empty point set")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate points at indices {first} and {second}")]
    DuplicatePoints { first: usize, second: usize },
}

fn check_dims<S: Scalar>(points: &[Point<S>], dim: usize) -> Result<(), ConvexError> {
    for p in points {
        if p.dim() != dim {
            return Err(ConvexError::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    Ok(())
}

/// Outcome of a convex hull membership test.
#[derive(Debug, Clone, PartialEq)]
pub enum HullMembership<S> {
    /// `z = sum(coefficients[i] * points[i])` with nonnegative coefficients
    /// summing to one.
    Inside {
        coefficients: Vec<S>,
    },
    Outside,
}

impl<S> HullMembership<S> {
    pub fn inside(&self) -> bool {
        matches!(self, HullMembership::Inside { .. })
    }

    pub fn coefficients(&self) -> Option<&[S]> {
        match self {
            HullMembership::Inside { coefficients } => Some(coefficients),
            HullMembership::Outside => None,
        }
    }
}

/// Decides `z ∈ Conv(points)` by LP feasibility: find `λ >= 0` with
/// `Σλ = 1` and `Σ λ_i x_i = z`. Exact in exact mode.
pub fn conv_contains<S: Scalar>(
    points: &[Point<S>],
    z: &Point<S>,
) -> Result<HullMembership<S>, ConvexError> {
    if points.is_empty() {
        return Err(ConvexError::EmptyInput);
    }
    check_dims(points, z.dim())?;
    let k = points.len();
    let n = z.dim();
    let mut constraints = Vec::with_capacity(n + 1);
    for d in 0..n {
        let coeffs: Vec<S> = points.iter().map(|p| p[d].clone()).collect();
        constraints.push(Constraint::new(coeffs, Relation::Eq, z[d].clone()));
    }
    constraints.push(Constraint::new(vec![S::one(); k], Relation::Eq, S::one()));
    let lp = LinearProgram::new(
        vec![S::zero(); k],
        constraints,
        vec![VarBound::NonNegative; k],
    );
    match solve_lp(&lp).expect("well-formed membership LP") {
        LpOutcome::Optimal { point, .. } => Ok(HullMembership::Inside {
            coefficients: point,
        }),
        LpOutcome::Infeasible => Ok(HullMembership::Outside),
        LpOutcome::Unbounded => unreachable!("feasibility LP with zero objective"),
    }
}

/// Nearest point of `Conv(points)` to `z`, with convex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormPoint<S> {
    pub sigma: Point<S>,
    /// Convex weights over `points`, aligned by index.
    pub coefficients: Vec<S>,
}

/// Affine minimizer of the squared norm over the given corral: solves the
/// KKT system of `min |Σ α_i p_i|^2` subject to `Σ α_i = 1`.
fn affine_minimizer<S: Scalar>(shifted: &[Vector<S>], corral: &[usize]) -> Vec<S> {
    let k = corral.len();
    let mut rows = Vec::with_capacity(k + 1);
    for &i in corral {
        let mut row: Vec<S> = corral
            .iter()
            .map(|&j| shifted[i].dot(&shifted[j]))
            .collect();
        row.push(S::one());
        rows.push(row);
    }
    let mut last = vec![S::one(); k];
    last.push(S::zero());
    rows.push(last);
    let mut rhs = vec![S::zero(); k];
    rhs.push(S::one());
    let m = Matrix::from_rows(rows).expect("square KKT rows");
    let solution = solve_linear(&m, &rhs)
        .expect("KKT dimensions agree")
        .expect("KKT system of a convex quadratic over an affine subspace is consistent");
    solution[..k].to_vec()
}

/// Projection of `z` onto `Conv(points)` via Wolfe's min-norm-point
/// algorithm on the shifted set `{x - z}`. Terminates exactly in exact mode;
/// float mode stops when the Wolfe criterion holds within tolerance.
pub fn min_norm_point<S: Scalar>(points: &[Point<S>], z: &Point<S>) -> MinNormPoint<S> {
    assert!(!points.is_empty(), "min_norm_point needs a nonempty set");
    let tol = Tolerance::default();
    let shifted: Vec<Vector<S>> = points.iter().map(|x| x.sub(z)).collect();

    // Start from the shortest shifted point.
    let start = (0..shifted.len())
        .min_by(|&a, &b| shifted[a].norm_sq().total_cmp(&shifted[b].norm_sq()))
        .expect("nonempty");
    let mut corral = vec![start];
    let mut weights = vec![S::one()];
    let mut current = shifted[start].clone();

    for _major in 0..10_000 {
        // Linear minimization oracle over the whole set.
        let q = (0..shifted.len())
            .min_by(|&a, &b| {
                current
                    .dot(&shifted[a])
                    .total_cmp(&current.dot(&shifted[b]))
            })
            .expect("nonempty");
        let against = current.dot(&shifted[q]);
        let norm_sq = current.norm_sq();
        // Wolfe criterion: min_p <x, p> >= <x, x> means x is optimal.
        if !against.lt_tol(&norm_sq, &tol) {
            break;
        }
        if corral.contains(&q) {
            // Only reachable through float round-off; the exact-mode minor
            // loop leaves <x, p> = |x|^2 for every corral member.
            break;
        }
        corral.push(q);
        weights.push(S::zero());

        for _minor in 0..10_000 {
            let alpha = affine_minimizer(&shifted, &corral);
            if alpha.iter().all(|a| a.sign_tol(&tol) == Sign::Positive) {
                weights = alpha;
                break;
            }
            // Step from `weights` toward `alpha` until the first weight dies.
            let mut theta: Option<(S, usize)> = None;
            for (idx, a) in alpha.iter().enumerate() {
                if a.sign_tol(&tol) == Sign::Positive {
                    continue;
                }
                let denom = weights[idx].clone() - a.clone();
                if denom.is_zero_tol(&tol) {
                    continue;
                }
                let ratio = weights[idx].clone() / denom;
                theta = match theta.take() {
                    None => Some((ratio, idx)),
                    Some((best, bi)) => {
                        if ratio.total_cmp(&best) == std::cmp::Ordering::Less {
                            Some((ratio, idx))
                        } else {
                            Some((best, bi))
                        }
                    }
                };
            }
            match theta {
                Some((theta, hit)) => {
                    let one_minus = S::one() - theta.clone();
                    for (w, a) in weights.iter_mut().zip(&alpha) {
                        *w = w.clone() * one_minus.clone() + a.clone() * theta.clone();
                    }
                    weights[hit] = S::zero();
                }
                None => {
                    // All offending coordinates already sit at weight zero.
                }
            }
            // Drop dead corral members.
            let mut kept_corral = Vec::with_capacity(corral.len());
            let mut kept_weights = Vec::with_capacity(weights.len());
            for (idx, w) in weights.iter().enumerate() {
                let dead = w.is_zero_tol(&tol) && alpha[idx].sign_tol(&tol) != Sign::Positive;
                if !dead {
                    kept_corral.push(corral[idx]);
                    kept_weights.push(w.clone());
                }
            }
            assert!(
                kept_corral.len() < corral.len(),
                "minor loop must shrink the corral"
            );
            corral = kept_corral;
            weights = kept_weights;
            if !S::EXACT {
                // Round-off can leave the weight sum slightly off one.
                let sum = weights.iter().fold(S::zero(), |acc, w| acc + w.clone());
                for w in weights.iter_mut() {
                    *w = w.clone() / sum.clone();
                }
            }
        }

        current = Point::zeros(z.dim());
        for (idx, w) in corral.iter().zip(&weights) {
            current = current.add(&shifted[*idx].scale(w));
        }
    }

    let sigma = z.add(&current);
    let mut coefficients = vec![S::zero(); points.len()];
    for (idx, w) in corral.iter().zip(&weights) {
        coefficients[*idx] = w.clone();
    }
    MinNormPoint {
        sigma,
        coefficients,
    }
}

/// Result of the positive-spanning test on a vector set `a`.
///
/// Exactly one alternative holds (asserted at runtime by cross-checking two
/// independent LPs): either the vectors positively span their linear span,
/// or some nonzero `v` in that span has `<v, a_i> <= 0` for every `i`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeTestResult<S> {
    /// `0` lies in the relative interior of `Conv(a)`; `margin` is the
    /// optimum of the relative-interior LP (`> 0`), and `coefficients` is a
    /// witness: `Σ λ_i a_i = 0`, `Σ λ_i = 1`, `λ_i >= margin`.
    PositivelySpans { margin: S, coefficients: Vec<S> },
    /// A nonzero `direction` in `Span(a)` with `<direction, a_i> <= 0` for
    /// all `i`. `origin_in_hull` records whether `0 ∈ Conv(a)` (the intended
    /// precondition of callers); `false` flags an out-of-contract query.
    Certificate {
        direction: Vector<S>,
        origin_in_hull: bool,
    },
}

/// Relative-interior LP: maximize `t` s.t. `Σ λ_i a_i = 0`, `Σ λ_i = 1`,
/// `λ_i >= t` (all variables free). Returns the optimum and the `λ` witness.
fn relint_lp<S: Scalar>(vectors: &[Vector<S>]) -> Option<(S, Vec<S>)> {
    let k = vectors.len();
    let n = vectors[0].dim();
    let mut constraints = Vec::with_capacity(n + 1 + k);
    for d in 0..n {
        let mut coeffs: Vec<S> = vectors.iter().map(|a| a[d].clone()).collect();
        coeffs.push(S::zero());
        constraints.push(Constraint::new(coeffs, Relation::Eq, S::zero()));
    }
    let mut coeffs = vec![S::one(); k];
    coeffs.push(S::zero());
    constraints.push(Constraint::new(coeffs, Relation::Eq, S::one()));
    for i in 0..k {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[i] = S::one();
        coeffs[k] = -S::one();
        constraints.push(Constraint::new(coeffs, Relation::Ge, S::zero()));
    }
    let mut objective = vec![S::zero(); k + 1];
    objective[k] = S::one();
    let lp = LinearProgram::new(objective, constraints, vec![VarBound::Free; k + 1]);
    match solve_lp(&lp).expect("well-formed relint LP") {
        LpOutcome::Optimal {
            point,
            objective_value,
        } => Some((objective_value, point[..k].to_vec())),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("t <= 1/k on the feasible set"),
    }
}

/// Certificate LP: find `v = Σ β_j a_j` with `<v, a_i> <= 0` for all `i`
/// and `Σ_i <v, a_i> = -1`. Feasible iff a certificate exists.
fn certificate_lp<S: Scalar>(vectors: &[Vector<S>]) -> Option<Vector<S>> {
    let k = vectors.len();
    let gram: Vec<Vec<S>> = vectors
        .iter()
        .map(|a| vectors.iter().map(|b| a.dot(b)).collect())
        .collect();
    let mut constraints = Vec::with_capacity(k + 1);
    for row in &gram {
        constraints.push(Constraint::new(row.clone(), Relation::Le, S::zero()));
    }
    let mut column_sums = vec![S::zero(); k];
    for row in &gram {
        for (acc, v) in column_sums.iter_mut().zip(row) {
            *acc = acc.clone() + v.clone();
        }
    }
    constraints.push(Constraint::new(column_sums, Relation::Eq, -S::one()));
    let lp = LinearProgram::new(vec![S::zero(); k], constraints, vec![VarBound::Free; k]);
    match solve_lp(&lp).expect("well-formed certificate LP") {
        LpOutcome::Optimal { point, .. } => {
            let n = vectors[0].dim();
            let mut v = Point::zeros(n);
            for (beta, a) in point.iter().zip(vectors) {
                v = v.add(&a.scale(beta));
            }
            Some(v)
        }
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("feasibility LP with zero objective"),
    }
}

/// Decides whether `a` positively spans `Span(a)` by running both the
/// relative-interior LP and the certificate LP and cross-checking that
/// exactly one succeeds. Panics when the two disagree, which would signal a
/// solver bug.
pub fn positive_span_test<S: Scalar>(vectors: &[Vector<S>]) -> ConeTestResult<S> {
    assert!(!vectors.is_empty(), "positive_span_test needs vectors");
    let tol = Tolerance::default();
    let relint = relint_lp(vectors);
    let certificate = certificate_lp(vectors);
    let spans = relint
        .as_ref()
        .is_some_and(|(margin, _)| margin.sign_tol(&tol) == Sign::Positive);
    match (spans, certificate) {
        (true, None) => {
            let (margin, coefficients) = relint.expect("checked above");
            ConeTestResult::PositivelySpans {
                margin,
                coefficients,
            }
        }
        (false, Some(direction)) => {
            let origin_in_hull = conv_contains(vectors, &Point::zeros(vectors[0].dim()))
                .expect("dimensions agree")
                .inside();
            ConeTestResult::Certificate {
                direction,
                origin_in_hull,
            }
        }
        (spans, certificate) => panic!(
            "cone test cross-assertion fired: relint-spans = {spans}, certificate = {}",
            certificate.is_some()
        ),
    }
}

/// A closed ball given by center and squared radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball<S> {
    pub center: Point<S>,
    pub squared_radius: S,
}

impl<S: Scalar> Ball<S> {
    pub fn contains(&self, p: &Point<S>) -> bool {
        let tol = Tolerance::default();
        p.dist_sq(&self.center).le_tol(&self.squared_radius, &tol)
    }
}

/// The unique point of `Aff(points)` equidistant from all of `points`,
/// together with the common squared radius; `None` when no such point exists
/// (e.g. three distinct collinear points). Solves the bisector system
/// restricted to the affine hull.
pub fn circumcenter_in_affine_hull<S: Scalar>(
    points: &[Point<S>],
) -> Result<Option<Ball<S>>, ConvexError> {
    if points.is_empty() {
        return Err(ConvexError::EmptyInput);
    }
    let dim = points[0].dim();
    check_dims(points, dim)?;
    let tol = Tolerance::default();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].dist_sq(&points[j]).is_zero_tol(&tol) {
                return Err(ConvexError::DuplicatePoints {
                    first: i,
                    second: j,
                });
            }
        }
    }

    let base = &points[0];
    let edges: Vec<Vector<S>> = points[1..].iter().map(|p| p.sub(base)).collect();
    if edges.is_empty() {
        return Ok(Some(Ball {
            center: base.clone(),
            squared_radius: S::zero(),
        }));
    }
    let two = S::from_int(2);
    let rows: Vec<Vec<S>> = edges
        .iter()
        .map(|ei| edges.iter().map(|ej| two.clone() * ei.dot(ej)).collect())
        .collect();
    let rhs: Vec<S> = edges.iter().map(Point::norm_sq).collect();
    let system = Matrix::from_rows(rows).expect("square Gram rows");
    let Some(mu) = solve_linear(&system, &rhs).expect("dimensions agree") else {
        return Ok(None);
    };
    let mut center = base.clone();
    for (m, e) in mu.iter().zip(&edges) {
        center = center.add(&e.scale(m));
    }
    let squared_radius = center.dist_sq(base);
    debug_assert!(
        !S::EXACT || points.iter().all(|p| center.dist_sq(p) == squared_radius),
        "bisector solution must be equidistant"
    );
    Ok(Some(Ball {
        center,
        squared_radius,
    }))
}

/// Smallest ball having all points of `boundary` on its boundary.
fn ball_with_boundary<S: Scalar>(points: &[Point<S>], boundary: &[usize]) -> Option<Ball<S>> {
    if boundary.is_empty() {
        return None;
    }
    let pts: Vec<Point<S>> = boundary.iter().map(|&i| points[i].clone()).collect();
    circumcenter_in_affine_hull(&pts).expect("distinct boundary points")
}

fn welzl_mtf<S: Scalar>(
    points: &[Point<S>],
    order: &mut Vec<usize>,
    upto: usize,
    boundary: &mut Vec<usize>,
) -> (Option<Ball<S>>, Vec<usize>) {
    let mut ball = ball_with_boundary(points, boundary);
    let mut support = boundary.clone();
    if boundary.len() == points[0].dim() + 1 {
        return (ball, support);
    }
    let mut i = 0;
    while i < upto {
        let idx = order[i];
        let outside = match &ball {
            None => true,
            Some(b) => !b.contains(&points[idx]),
        };
        if outside {
            boundary.push(idx);
            let (b, s) = welzl_mtf(points, order, i, boundary);
            boundary.pop();
            ball = b;
            support = s;
            // Move-to-front: points found outside are likely decisive.
            let moved = order.remove(i);
            order.insert(0, moved);
        }
        i += 1;
    }
    (ball, support)
}

/// Smallest enclosing ball via Welzl's move-to-front recursion over the
/// deterministic input order (no randomization). Exact center and squared
/// radius in exact mode.
pub fn min_enclosing_ball<S: Scalar>(points: &[Point<S>]) -> Ball<S> {
    min_enclosing_ball_with_support(points).0
}

/// As [`min_enclosing_ball`], also returning indices of a support set: at
/// most `dim + 1` points that lie on the boundary and determine the ball.
pub fn min_enclosing_ball_with_support<S: Scalar>(points: &[Point<S>]) -> (Ball<S>, Vec<usize>) {
    assert!(!points.is_empty(), "min_enclosing_ball needs points");
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut boundary = Vec::new();
    let (ball, mut support) = welzl_mtf(points, &mut order, points.len(), &mut boundary);
    let ball = ball.expect("nonempty input yields a ball");
    support.sort_unstable();
    (ball, support)
}
