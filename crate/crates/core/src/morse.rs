//! Projection sets, the generalized gradient, Clarke subdifferential
//! generators, topological classification of points, and enumeration of all
//! differential critical points of the distance function to a point cloud.
//!
//! The classification implemented here: points of the cloud are topological
//! critical points of index 0; a point `z ∉ X` with `z ∈ Conv(Π_X(z))` is a
//! topological regular point when some nonzero `v ∈ Span(Π_X(z) - z)` has
//! `<v, x - z> <= 0` for every projection `x`, and otherwise a topological
//! critical point of index `dim Span(Π_X(z) - z)`. All other points are
//! regular (nonvanishing gradient).

use thiserror::Error;

use crate::convex::{
    circumcenter_in_affine_hull, conv_contains, min_norm_point, positive_span_test, ConeTestResult,
};
use crate::num::{rank_and_basis, Point, Scalar, Tolerance, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CloudError {
    #[error("point cloud is empty")]
    Empty,
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate points at indices {first} and {second}")]
    Duplicate { first: usize, second: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("query point coincides with cloud point {index}")]
    QueryIsCloudPoint { index: usize },
    #[error("cloud has {size} points, enumeration cap is {cap} (subset enumeration is exponential); raise the cap to proceed")]
    CloudTooLarge { size: usize, cap: usize },
}

/// An immutable ordered set of pairwise distinct points in R^n.
///
/// Distinctness is checked exactly in exact mode and against the cloud's
/// tolerance in float mode; the tolerance also governs float-mode tie
/// grouping in [`PointCloud::projection_set`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<S> {
    points: Vec<Point<S>>,
    ambient: usize,
    tolerance: Tolerance,
}

impl<S: Scalar> PointCloud<S> {
    pub fn new(points: Vec<Point<S>>) -> Result<Self, CloudError> {
        Self::with_tolerance(points, Tolerance::default())
    }

    pub fn with_tolerance(points: Vec<Point<S>>, tolerance: Tolerance) -> Result<Self, CloudError> {
        let Some(first) = points.first() else {
            return Err(CloudError::Empty);
        };
        let ambient = first.dim();
        for (index, p) in points.iter().enumerate() {
            if p.dim() != ambient {
                return Err(CloudError::DimensionMismatch {
                    index,
                    expected: ambient,
                    found: p.dim(),
                });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].dist_sq(&points[j]).is_zero_tol(&tolerance) {
                    return Err(CloudError::Duplicate {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(PointCloud {
            points,
            ambient,
            tolerance,
        })
    }

    pub fn points(&self) -> &[Point<S>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point<S> {
        &self.points[index]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty clouds
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tolerance
    }

    /// Squared distance `d_X(z)^2`.
    pub fn squared_distance(&self, z: &Point<S>) -> S {
        self.points
            .iter()
            .map(|p| p.dist_sq(z))
            .min_by(|a, b| a.total_cmp(b))
            .expect("nonempty cloud")
    }

    /// `d_X(z)` as a float (exact values take a square root).
    pub fn distance_f64(&self, z: &Point<S>) -> f64 {
        self.squared_distance(z).to_f64().sqrt()
    }

    /// Index of the cloud point equal to `z`, if any.
    pub fn position_of(&self, z: &Point<S>) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.dist_sq(z).is_zero_tol(&self.tolerance))
    }

    /// The projection set `Π_X(z)`: indices of all points attaining the
    /// minimum distance, with the squared minimum. Exact argmin in exact
    /// mode; float mode groups ties by the cloud's relative tolerance on
    /// squared distances.
    pub fn projection_set(&self, z: &Point<S>) -> ProjectionRecord<S> {
        let squared: Vec<S> = self.points.iter().map(|p| p.dist_sq(z)).collect();
        let min = squared
            .iter()
            .min_by(|a, b| a.total_cmp(b))
            .expect("nonempty cloud")
            .clone();
        let indices = squared
            .iter()
            .enumerate()
            .filter(|(_, d)| d.eq_tol(&min, &self.tolerance))
            .map(|(i, _)| i)
            .collect();
        ProjectionRecord {
            indices,
            squared_value: min,
        }
    }

    /// The generalized gradient `∇d_X(z) = (z - σ_X(z)) / d_X(z)` (zero on
    /// the cloud itself), kept unnormalized and exact; the normalized float
    /// form is available on demand.
    pub fn generalized_gradient(&self, z: &Point<S>) -> Gradient<S> {
        let projection = self.projection_set(z);
        if projection.squared_value.is_zero_tol(&self.tolerance) {
            // z is a cloud point: the gradient is defined to vanish.
            return Gradient {
                projection,
                sigma: z.clone(),
                direction: Point::zeros(z.dim()),
            };
        }
        let members: Vec<Point<S>> = projection
            .indices
            .iter()
            .map(|&i| self.points[i].clone())
            .collect();
        let projection_result = min_norm_point(&members, z);
        let direction = z.sub(&projection_result.sigma);
        Gradient {
            projection,
            sigma: projection_result.sigma,
            direction,
        }
    }

    /// Generating set of the Clarke subdifferential at `z ∉ X`: the vectors
    /// `z - x` over `x ∈ Π_X(z)`, all of common squared length `d_X(z)^2`.
    pub fn clarke_generators(&self, z: &Point<S>) -> Result<ClarkeGenerators<S>, MorseError> {
        if let Some(index) = self.position_of(z) {
            return Err(MorseError::QueryIsCloudPoint { index });
        }
        let projection = self.projection_set(z);
        let generators = projection
            .indices
            .iter()
            .map(|&i| z.sub(&self.points[i]))
            .collect();
        Ok(ClarkeGenerators {
            generators,
            squared_length: projection.squared_value.clone(),
            projection,
        })
    }

    /// Topological classification of `z` per the index formula
    /// `m = dim Span(Π_X(z) - z)`.
    pub fn classify(&self, z: &Point<S>) -> Classification<S> {
        assert_eq!(z.dim(), self.ambient, "dimension mismatch");
        if self.position_of(z).is_some() {
            return Classification::CriticalIndexZero;
        }
        let projection = self.projection_set(z);
        let members: Vec<Point<S>> = projection
            .indices
            .iter()
            .map(|&i| self.points[i].clone())
            .collect();
        let membership = conv_contains(&members, z).expect("dimensions agree");
        if !membership.inside() {
            let gradient = z.sub(&min_norm_point(&members, z).sigma);
            return Classification::Regular(RegularReason::NotDifferentialCritical { gradient });
        }
        let shifted: Vec<Vector<S>> = members.iter().map(|x| x.sub(z)).collect();
        match positive_span_test(&shifted) {
            ConeTestResult::PositivelySpans { margin, .. } => Classification::Critical {
                index: rank_and_basis(&shifted).dim(),
                margin,
            },
            ConeTestResult::Certificate { direction, .. } => {
                Classification::Regular(RegularReason::CertificateExists {
                    certificate: direction,
                })
            }
        }
    }

    /// Enumerates every differential critical point of `d_X`.
    ///
    /// Emits one index-0 record per cloud point, then walks subsets `S ⊆ X`
    /// with `|S| >= 2`: a subset's circumcenter-in-affine-hull `c` is kept
    /// only when `Π_X(c) = S` (each critical point appears exactly once, via
    /// its maximal projection set) and `c ∈ Conv(S)`; kept candidates are
    /// classified. Subsets with no equidistant point are dropped along with
    /// all their supersets, which cannot have one either. Differential
    /// critical points that are topologically regular are included, flagged
    /// by their classification. Output is sorted by squared value, then by
    /// lexicographic location.
    pub fn enumerate_critical(
        &self,
        options: &EnumerationOptions,
    ) -> Result<Vec<CriticalPointRecord<S>>, MorseError> {
        if self.len() > options.max_points {
            return Err(MorseError::CloudTooLarge {
                size: self.len(),
                cap: options.max_points,
            });
        }
        let mut records: Vec<CriticalPointRecord<S>> = (0..self.len())
            .map(|i| CriticalPointRecord {
                location: self.points[i].clone(),
                squared_value: S::zero(),
                projection: ProjectionRecord {
                    indices: vec![i],
                    squared_value: S::zero(),
                },
                classification: Classification::CriticalIndexZero,
            })
            .collect();

        let mut subset: Vec<usize> = Vec::new();
        self.extend_subsets(&mut subset, 0, &mut records);

        records.sort_by(|a, b| {
            a.squared_value
                .total_cmp(&b.squared_value)
                .then_with(|| a.location.lex_cmp(&b.location))
        });
        Ok(records)
    }

    fn extend_subsets(
        &self,
        subset: &mut Vec<usize>,
        start: usize,
        records: &mut Vec<CriticalPointRecord<S>>,
    ) {
        for j in start..self.len() {
            subset.push(j);
            let members: Vec<Point<S>> = subset.iter().map(|&i| self.points[i].clone()).collect();
            let ball = circumcenter_in_affine_hull(&members).expect("cloud points are distinct");
            if let Some(ball) = ball {
                if subset.len() >= 2 {
                    let projection = self.projection_set(&ball.center);
                    if projection.indices == *subset
                        && conv_contains(&members, &ball.center)
                            .expect("dimensions agree")
                            .inside()
                    {
                        let classification = self.classify(&ball.center);
                        records.push(CriticalPointRecord {
                            location: ball.center,
                            squared_value: projection.squared_value.clone(),
                            projection,
                            classification,
                        });
                    }
                }
                // A subset with a circumcenter may still extend; one without
                // cannot regain it, so the branch is pruned.
                self.extend_subsets(subset, j + 1, records);
            }
            subset.pop();
        }
    }
}

/// `Π_X(z)` as a sorted index set into the cloud, plus `R^2 = d_X(z)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionRecord<S> {
    pub indices: Vec<usize>,
    pub squared_value: S,
}

/// The generalized gradient at a query point, unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient<S> {
    pub projection: ProjectionRecord<S>,
    /// `σ_X(z)`: nearest point of `Conv(Π_X(z))` to `z`.
    pub sigma: Point<S>,
    /// `z - σ_X(z)`; the zero vector exactly at differential critical points.
    pub direction: Vector<S>,
}

impl<S: Scalar> Gradient<S> {
    pub fn is_zero(&self) -> bool {
        self.direction.is_zero()
    }

    /// `(z - σ) / d_X(z)` in floats; the zero vector on the cloud itself.
    pub fn normalized(&self) -> Vec<f64> {
        let r = self.projection.squared_value.to_f64().sqrt();
        if r == 0.0 {
            return vec![0.0; self.sigma.dim()];
        }
        self.direction.to_f64().into_iter().map(|c| c / r).collect()
    }
}

/// Generators of the Clarke subdifferential `∂d_X(z)`: it is the convex hull
/// of the normalized generators.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkeGenerators<S> {
    pub projection: ProjectionRecord<S>,
    /// Unnormalized generators `z - x`, ordered like `projection.indices`.
    pub generators: Vec<Vector<S>>,
    /// Common squared length of every generator (`= d_X(z)^2`).
    pub squared_length: S,
}

impl<S: Scalar> ClarkeGenerators<S> {
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        let r = self.squared_length.to_f64().sqrt();
        self.generators
            .iter()
            .map(|g| g.to_f64().into_iter().map(|c| c / r).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification<S> {
    /// `z ∈ X`.
    CriticalIndexZero,
    /// Topological critical point of index `1 <= index <= n`, with the
    /// relative-interior margin from the cone test as a witness.
    Critical {
        index: usize,
        margin: S,
    },
    Regular(RegularReason<S>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegularReason<S> {
    /// `∇d_X(z) != 0`; carries the unnormalized gradient `z - σ`.
    NotDifferentialCritical { gradient: Vector<S> },
    /// Differential critical, yet topologically regular: a nonzero
    /// `certificate ∈ Span(Π_X(z) - z)` with `<certificate, x - z> <= 0`
    /// for every projection `x`.
    CertificateExists { certificate: Vector<S> },
}

impl<S> Classification<S> {
    /// Topological critical points (index 0 included).
    pub fn is_topological_critical(&self) -> bool {
        matches!(
            self,
            Classification::CriticalIndexZero | Classification::Critical { .. }
        )
    }

    /// Index of a topological critical point; `None` for regular points.
    pub fn index(&self) -> Option<usize> {
        match self {
            Classification::CriticalIndexZero => Some(0),
            Classification::Critical { index, .. } => Some(*index),
            Classification::Regular(_) => None,
        }
    }
}

/// One enumerated differential critical point (or cloud point).
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointRecord<S> {
    pub location: Point<S>,
    /// `d_X(location)^2`.
    pub squared_value: S,
    pub projection: ProjectionRecord<S>,
    pub classification: Classification<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Largest cloud size accepted by `enumerate_critical`.
    pub max_points: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { max_points: 25 }
    }
}

impl EnumerationOptions {
    pub fn with_cap(max_points: usize) -> Self {
        EnumerationOptions { max_points }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};
    use rand::{Rng, SeedableRng};

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn qf(n: i64, d: i64) -> Q {
        Q::from_fraction(n, d)
    }

    fn cloud(coords: &[&[i64]]) -> PointCloud<Q> {
        PointCloud::new(coords.iter().map(|c| Point::from_ints(c)).collect()).unwrap()
    }

    fn square() -> PointCloud<Q> {
        cloud(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])
    }

    #[test]
    fn cloud_rejects_duplicates_and_empty() {
        assert_eq!(PointCloud::<Q>::new(vec![]).unwrap_err(), CloudError::Empty);
        let dup = PointCloud::new(vec![
            Point::<Q>::from_ints(&[0, 0]),
            Point::from_ints(&[0, 0]),
        ]);
        assert_eq!(
            dup.unwrap_err(),
            CloudError::Duplicate {
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn projection_set_on_unit_circle_points() {
        let c = cloud(&[&[-1, 0], &[1, 0], &[0, 1]]);
        let p = c.projection_set(&Point::zeros(2));
        assert_eq!(p.indices, vec![0, 1, 2]);
        assert_eq!(p.squared_value, q(1));
    }

    #[test]
    fn projection_set_of_nearest_single_point() {
        let c = cloud(&[&[0, 0], &[5, 0]]);
        let p = c.projection_set(&Point::from_ints(&[1, 0]));
        assert_eq!(p.indices, vec![0]);
        assert_eq!(p.squared_value, q(1));
    }

    #[test]
    fn projection_set_of_square_edge() {
        let c = square();
        let p = c.projection_set(&Point::from_ints(&[1, 0]));
        assert_eq!(p.indices, vec![0, 1]); // (1,1) and (1,-1)
        assert_eq!(p.squared_value, q(1));
    }

    #[test]
    fn gradient_is_radial_for_single_point_cloud() {
        let c = cloud(&[&[0, 0]]);
        let g = c.generalized_gradient(&Point::from_ints(&[3, 4]));
        assert_eq!(g.direction, Point::from_ints(&[3, 4]));
        assert_eq!(g.normalized(), vec![0.6, 0.8]);
    }

    #[test]
    fn gradient_forced_to_origin_by_symmetry() {
        let c = cloud(&[&[-1, 0], &[1, 0]]);
        let g = c.generalized_gradient(&Point::from_ints(&[0, 1]));
        assert_eq!(g.sigma, Point::zeros(2));
        assert_eq!(g.direction, Point::from_ints(&[0, 1]));
        let n = g.normalized();
        assert_eq!(n[0], 0.0);
        assert!((n[1] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gradient_vanishes_when_sigma_equals_z() {
        let c = cloud(&[&[-1, 0], &[1, 0], &[0, 1]]);
        let g = c.generalized_gradient(&Point::zeros(2));
        assert!(g.is_zero());
        assert_eq!(g.sigma, Point::zeros(2));
    }

    #[test]
    fn clarke_generators_of_symmetric_pair() {
        let c = cloud(&[&[-1, 0], &[1, 0]]);
        let g = c.clarke_generators(&Point::from_ints(&[0, 1])).unwrap();
        assert_eq!(
            g.generators,
            vec![Point::from_ints(&[1, 1]), Point::from_ints(&[-1, 1])]
        );
        assert_eq!(g.squared_length, q(2));
    }

    #[test]
    fn clarke_generators_of_square_center() {
        let c = square();
        let g = c.clarke_generators(&Point::zeros(2)).unwrap();
        assert_eq!(g.generators.len(), 4);
        assert_eq!(g.squared_length, q(2));
        for gen in &g.generators {
            assert_eq!(gen.norm_sq(), q(2));
        }
    }

    #[test]
    fn clarke_generators_reject_cloud_points() {
        let c = cloud(&[&[0, 0]]);
        assert_eq!(
            c.clarke_generators(&Point::zeros(2)).unwrap_err(),
            MorseError::QueryIsCloudPoint { index: 0 }
        );
    }

    #[test]
    fn classify_pair_midpoint_as_index_one() {
        let c = cloud(&[&[-1, 0], &[1, 0]]);
        match c.classify(&Point::zeros(2)) {
            Classification::Critical { index, margin } => {
                assert_eq!(index, 1);
                assert!(margin.is_positive());
            }
            other => panic!("expected Critical, got {other:?}"),
        }
    }

    #[test]
    fn classify_triangle_center_as_regular_with_certificate() {
        let c = cloud(&[&[-1, 0], &[1, 0], &[0, 1]]);
        match c.classify(&Point::zeros(2)) {
            Classification::Regular(RegularReason::CertificateExists { certificate }) => {
                // All valid certificates point along -e2.
                assert!(certificate[0].is_zero());
                assert!(certificate[1].is_negative());
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn classify_cocircular_triangle_center_as_index_two() {
        // Rational points on the unit circle spread over three quadrants:
        // an exactly cocircular stand-in for the equilateral triangle.
        let c = PointCloud::new(vec![
            Point::new(vec![q(1), q(0)]),
            Point::new(vec![qf(-3, 5), qf(4, 5)]),
            Point::new(vec![qf(-3, 5), qf(-4, 5)]),
        ])
        .unwrap();
        match c.classify(&Point::zeros(2)) {
            Classification::Critical { index, .. } => assert_eq!(index, 2),
            other => panic!("expected Critical(2), got {other:?}"),
        }
    }

    #[test]
    fn classify_approximate_equilateral_triangle_at_its_circumcenter() {
        // A rational approximation of the equilateral triangle is no longer
        // cocircular around the origin; its true center is the circumcenter,
        // and that is where the index-2 critical point sits.
        let pts = vec![
            Point::new(vec![q(1), q(0)]),
            Point::new(vec![qf(-1, 2), qf(866, 1000)]),
            Point::new(vec![qf(-1, 2), qf(-866, 1000)]),
        ];
        let c = PointCloud::new(pts.clone()).unwrap();
        let ball = circumcenter_in_affine_hull(&pts).unwrap().unwrap();
        let projection = c.projection_set(&ball.center);
        assert_eq!(projection.indices, vec![0, 1, 2]);
        match c.classify(&ball.center) {
            Classification::Critical { index, .. } => assert_eq!(index, 2),
            other => panic!("expected Critical(2), got {other:?}"),
        }
    }

    #[test]
    fn classify_cloud_point_as_index_zero() {
        let c = cloud(&[&[5, 5]]);
        assert_eq!(
            c.classify(&Point::from_ints(&[5, 5])),
            Classification::CriticalIndexZero
        );
    }

    #[test]
    fn enumerate_square_cloud() {
        let c = square();
        let records = c
            .enumerate_critical(&EnumerationOptions::default())
            .unwrap();
        assert_eq!(records.len(), 9);
        let zeros: Vec<_> = records
            .iter()
            .filter(|r| r.classification == Classification::CriticalIndexZero)
            .collect();
        assert_eq!(zeros.len(), 4);
        assert!(zeros.iter().all(|r| r.squared_value.is_zero()));
        let ones: Vec<_> = records
            .iter()
            .filter(|r| r.classification.index() == Some(1))
            .collect();
        assert_eq!(ones.len(), 4);
        let mut midpoints: Vec<Vec<i64>> = vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]];
        midpoints.sort();
        let mut found: Vec<Vec<f64>> = ones.iter().map(|r| r.location.to_f64()).collect();
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (f, m) in found.iter().zip(&midpoints) {
            assert_eq!(f, &m.iter().map(|&v| v as f64).collect::<Vec<_>>());
        }
        assert!(ones.iter().all(|r| r.squared_value == q(1)));
        let twos: Vec<_> = records
            .iter()
            .filter(|r| r.classification.index() == Some(2))
            .collect();
        assert_eq!(twos.len(), 1);
        assert_eq!(twos[0].location, Point::zeros(2));
        assert_eq!(twos[0].squared_value, q(2));
    }

    #[test]
    fn enumerate_collinear_cloud() {
        let c = cloud(&[&[0, 0], &[1, 0], &[2, 0], &[3, 0]]);
        let records = c
            .enumerate_critical(&EnumerationOptions::default())
            .unwrap();
        assert_eq!(records.len(), 7);
        let ones: Vec<_> = records
            .iter()
            .filter(|r| r.classification.index() == Some(1))
            .collect();
        assert_eq!(ones.len(), 3);
        for (r, expected_x) in ones.iter().zip([qf(1, 2), qf(3, 2), qf(5, 2)]) {
            assert_eq!(r.location, Point::new(vec![expected_x, q(0)]));
            assert_eq!(r.squared_value, qf(1, 4));
        }
        // pure merging: no regular-but-differential-critical records here
        assert!(records.iter().all(|r| r.classification.index().is_some()));
    }

    #[test]
    fn enumerate_triangle_includes_flagged_regular_center() {
        let c = cloud(&[&[-1, 0], &[1, 0], &[0, 1]]);
        let records = c
            .enumerate_critical(&EnumerationOptions::default())
            .unwrap();
        assert_eq!(records.len(), 6);
        let ones: Vec<_> = records
            .iter()
            .filter(|r| r.classification.index() == Some(1))
            .collect();
        assert_eq!(ones.len(), 2);
        assert!(ones.iter().all(|r| r.squared_value == qf(1, 2)));
        let regular: Vec<_> = records
            .iter()
            .filter(|r| {
                matches!(
                    r.classification,
                    Classification::Regular(RegularReason::CertificateExists { .. })
                )
            })
            .collect();
        assert_eq!(regular.len(), 1);
        assert_eq!(regular[0].location, Point::zeros(2));
        assert_eq!(regular[0].squared_value, q(1));
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let pts: Vec<Point<Q>> = (0..26).map(|i| Point::from_ints(&[i, 0])).collect();
        let c = PointCloud::new(pts).unwrap();
        assert_eq!(
            c.enumerate_critical(&EnumerationOptions::default())
                .unwrap_err(),
            MorseError::CloudTooLarge { size: 26, cap: 25 }
        );
        assert!(c
            .enumerate_critical(&EnumerationOptions::with_cap(26))
            .is_ok());
    }

    fn random_cloud(rng: &mut impl Rng, n: usize, max_points: usize) -> PointCloud<Q> {
        loop {
            let k = rng.gen_range(1..=max_points);
            let pts: Vec<Point<Q>> = (0..k)
                .map(|_| {
                    Point::new(
                        (0..n)
                            .map(|_| qf(rng.gen_range(-4..=4), rng.gen_range(1..=2)))
                            .collect(),
                    )
                })
                .collect();
            if let Ok(c) = PointCloud::new(pts) {
                return c;
            }
        }
    }

    #[test]
    fn gradient_norm_is_bounded_with_equality_iff_sigma_projects() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..80 {
            let n = rng.gen_range(2..=3);
            let c = random_cloud(&mut rng, n, 5);
            let z = Point::new(
                (0..n)
                    .map(|_| qf(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
                    .collect::<Vec<Q>>(),
            );
            let g = c.generalized_gradient(&z);
            let dir_sq = g.direction.norm_sq();
            assert!(dir_sq <= g.projection.squared_value);
            let sigma_in_projection = g.projection.indices.iter().any(|&i| c.point(i) == &g.sigma);
            assert_eq!(dir_sq == g.projection.squared_value, sigma_in_projection);
        }
    }

    #[test]
    fn zero_gradient_iff_hull_membership() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..80 {
            let n = rng.gen_range(2..=3);
            let c = random_cloud(&mut rng, n, 5);
            let z = Point::new(
                (0..n)
                    .map(|_| qf(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
                    .collect::<Vec<Q>>(),
            );
            if c.position_of(&z).is_some() {
                continue;
            }
            let g = c.generalized_gradient(&z);
            let members: Vec<Point<Q>> = g
                .projection
                .indices
                .iter()
                .map(|&i| c.point(i).clone())
                .collect();
            let inside = conv_contains(&members, &z).unwrap().inside();
            assert_eq!(g.is_zero(), inside);
        }
    }

    #[test]
    fn morse_euler_identity_on_random_clouds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(2..=3);
            let c = random_cloud(&mut rng, n, 7);
            let records = c
                .enumerate_critical(&EnumerationOptions::default())
                .unwrap();
            let mut euler = 0i64;
            for r in &records {
                if let Some(index) = r.classification.index() {
                    assert!(index <= n);
                    if r.classification != Classification::CriticalIndexZero {
                        assert!(index >= 1);
                    }
                    euler += if index % 2 == 0 { 1 } else { -1 };
                }
            }
            assert_eq!(euler, 1, "Morse–Euler identity failed for {c:?}");
        }
    }

    #[test]
    fn records_are_invariant_under_similarity_transforms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let n = rng.gen_range(2..=3);
            let c = random_cloud(&mut rng, n, 5);
            let records = c
                .enumerate_critical(&EnumerationOptions::default())
                .unwrap();
            for _ in 0..3 {
                // random similarity: coordinate permutation, sign flips,
                // positive rational scaling, rational translation
                let mut perm: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    let j = rng.gen_range(0..=i);
                    perm.swap(i, j);
                }
                let signs: Vec<Q> = (0..n)
                    .map(|_| if rng.gen_bool(0.5) { q(1) } else { q(-1) })
                    .collect();
                let scale = qf(rng.gen_range(1..=4), rng.gen_range(1..=3));
                let shift: Vec<Q> = (0..n)
                    .map(|_| qf(rng.gen_range(-5..=5), rng.gen_range(1..=2)))
                    .collect();
                let transform = |p: &Point<Q>| -> Point<Q> {
                    Point::new(
                        (0..n)
                            .map(|d| {
                                p[perm[d]].clone() * signs[d].clone() * scale.clone()
                                    + shift[d].clone()
                            })
                            .collect(),
                    )
                };
                let mapped = PointCloud::new(c.points().iter().map(&transform).collect()).unwrap();
                let mapped_records = mapped
                    .enumerate_critical(&EnumerationOptions::default())
                    .unwrap();
                assert_eq!(records.len(), mapped_records.len());
                let scale_sq = scale.clone() * scale.clone();
                let mut expected: Vec<(Point<Q>, Q, Option<usize>, bool)> = records
                    .iter()
                    .map(|r| {
                        (
                            transform(&r.location),
                            r.squared_value.clone() * scale_sq.clone(),
                            r.classification.index(),
                            r.classification.is_topological_critical(),
                        )
                    })
                    .collect();
                expected.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.lex_cmp(&b.0)));
                for (got, want) in mapped_records.iter().zip(&expected) {
                    assert_eq!(got.location, want.0);
                    assert_eq!(got.squared_value, want.1);
                    assert_eq!(got.classification.index(), want.2);
                    assert_eq!(got.classification.is_topological_critical(), want.3);
                }
            }
        }
    }

    #[test]
    fn float_and_exact_enumeration_agree_on_separated_clouds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let n = rng.gen_range(2..=3);
            let mut coords: Vec<Vec<i64>> = Vec::new();
            let k = rng.gen_range(1..=6);
            while coords.len() < k {
                let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                if !coords.contains(&p) {
                    coords.push(p);
                }
            }
            let exact =
                PointCloud::<Q>::new(coords.iter().map(|c| Point::from_ints(c)).collect()).unwrap();
            let float =
                PointCloud::<f64>::new(coords.iter().map(|c| Point::from_ints(c)).collect())
                    .unwrap();
            fn kinds<S: Scalar>(records: &[CriticalPointRecord<S>]) -> Vec<Option<usize>> {
                let mut v: Vec<Option<usize>> =
                    records.iter().map(|r| r.classification.index()).collect();
                v.sort();
                v
            }
            let exact_records = exact
                .enumerate_critical(&EnumerationOptions::default())
                .unwrap();
            let float_records = float
                .enumerate_critical(&EnumerationOptions::default())
                .unwrap();
            assert_eq!(kinds(&exact_records), kinds(&float_records));
        }
    }

    #[test]
    fn normalized_gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let mut checked = 0;
        while checked < 100 {
            let n = rng.gen_range(2..=3);
            let k = rng.gen_range(1..=6);
            let pts: Vec<Point<f64>> = (0..k)
                .map(|_| Point::new((0..n).map(|_| rng.gen_range(-4.0..4.0)).collect()))
                .collect();
            let Ok(c) = PointCloud::new(pts) else {
                continue;
            };
            let z = Point::new(
                (0..n)
                    .map(|_| rng.gen_range(-5.0..5.0))
                    .collect::<Vec<f64>>(),
            );
            // unique, well-separated nearest neighbor
            let mut dists: Vec<f64> = c.points().iter().map(|p| p.dist_sq(&z)).collect();
            dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if dists[0] < 1e-2 || (dists.len() > 1 && dists[1] - dists[0] < 1e-2) {
                continue;
            }
            let g = c.generalized_gradient(&z);
            let grad = g.normalized();
            let step = 1e-6;
            for d in 0..n {
                let mut up = z.coords().to_vec();
                up[d] += step;
                let mut down = z.coords().to_vec();
                down[d] -= step;
                let fd = (c.distance_f64(&Point::new(up)) - c.distance_f64(&Point::new(down)))
                    / (2.0 * step);
                assert!(
                    (fd - grad[d]).abs() < 1e-5,
                    "finite difference {fd} vs gradient {}",
                    grad[d]
                );
            }
            checked += 1;
        }
    }
}
