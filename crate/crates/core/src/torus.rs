//! Eigenvalue vectors on the torus `T^r` and signed intersection counts.
//!
//! Each circle is parametrized by `t` in `R/2Z` with `z = exp(pi i t)`, so an
//! angle `theta` is a coordinate directly. All computation happens in the
//! universal cover `R^r`: crossing the subtorus `{z_i = 1}` means crossing an
//! even integer in coordinate `i`, counted `+1` when the coordinate increases.

use std::num::NonZeroU64;

use serde::{Deserialize, Serialize};

use crate::descriptor::PathDescriptor;
use crate::error::{Error, Result};
use crate::index::{check_condition_b, jump_sequence};
use crate::rational::{is_even_integer, multiple_mod2, wall_index, Rational};

/// Point of `T^r`, coordinates in `[0, 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coordinates: Vec<Rational>,
}

impl TorusPoint {
    pub fn coordinates(&self) -> &[Rational] {
        &self.coordinates
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }
}

/// `T = sum_i sgn_i * {z_i = 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexCycle {
    weights: Vec<i64>,
}

impl IndexCycle {
    pub fn new(weights: Vec<i64>) -> Self {
        IndexCycle { weights }
    }

    /// Index cycle of a descriptor, one wall per elliptic angle.
    pub fn of(d: &PathDescriptor) -> Self {
        IndexCycle {
            weights: d.elliptic().iter().map(|e| e.signature()).collect(),
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }
}

/// Polyline in the universal cover; consecutive points bound straight
/// segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiftedPath {
    points: Vec<Vec<Rational>>,
}

impl LiftedPath {
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        };
        let r = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: bad.len(),
            });
        }
        Ok(LiftedPath { points })
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }

    pub fn start(&self) -> &[Rational] {
        &self.points[0]
    }

    pub fn end(&self) -> &[Rational] {
        &self.points[self.points.len() - 1]
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &LiftedPath) -> Option<LiftedPath> {
        if self.end() != other.start() {
            return None;
        }
        let mut points = self.points.clone();
        points.extend(other.points[1..].iter().cloned());
        Some(LiftedPath { points })
    }

    pub fn translate(&self, offset: &[Rational]) -> LiftedPath {
        LiftedPath {
            points: self
                .points
                .iter()
                .map(|p| p.iter().zip(offset).map(|(x, v)| x + v).collect())
                .collect(),
        }
    }

    /// Closed as a path on the torus: end minus start lies in `(2Z)^r`.
    pub fn is_closed_on_torus(&self) -> bool {
        self.start()
            .iter()
            .zip(self.end())
            .all(|(s, e)| is_even_integer(&(e - s)))
    }

    pub fn to_spec(&self) -> LiftedPathSpec {
        LiftedPathSpec {
            points: self.points.clone(),
        }
    }
}

/// JSON form `{"points": [["p/q", ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedPathSpec {
    #[serde(with = "points_as_strings")]
    pub points: Vec<Vec<Rational>>,
}

impl LiftedPathSpec {
    pub fn validate(&self) -> Result<LiftedPath> {
        LiftedPath::new(self.points.clone())
    }
}

mod points_as_strings {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::Rational;

    #[derive(Serialize, Deserialize)]
    struct Point(#[serde(with = "crate::rational::vec_as_string")] Vec<Rational>);

    pub fn serialize<S: Serializer>(points: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Point> = points.iter().cloned().map(Point).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let wrapped = Vec::<Point>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|p| p.0).collect())
    }
}

/// `lambda^k = (k theta_1, ..., k theta_r) mod 2`.
pub fn eigenvalue_vector(d: &PathDescriptor, k: u64) -> Result<TorusPoint> {
    d.horizon().check(k)?;
    Ok(TorusPoint {
        coordinates: d
            .elliptic()
            .iter()
            .map(|e| multiple_mod2(&e.theta(), k))
            .collect(),
    })
}

fn angles(d: &PathDescriptor) -> Vec<Rational> {
    d.elliptic().iter().map(|e| e.theta()).collect()
}

/// Lift of `lambda^k A ∪ ... ∪ lambda^m A`, starting at the representative of
/// `lambda^k` in `[0, 2)^r` and stepping by `theta` once per arc.
pub fn iterated_arc(d: &PathDescriptor, k: u64, m: u64) -> Result<LiftedPath> {
    if k == 0 {
        return Err(Error::ZeroIterate);
    }
    d.horizon().check(m + 1)?;
    let step = angles(d);
    let mut current = eigenvalue_vector(d, k)?.coordinates;
    let mut points = Vec::with_capacity((m.saturating_sub(k) + 2) as usize);
    points.push(current.clone());
    for _ in k..=m {
        current = current.iter().zip(&step).map(|(x, t)| x + t).collect();
        points.push(current.clone());
    }
    Ok(LiftedPath { points })
}

/// The generating arc translated by `lambda^k`, from `lambda^k` to
/// `lambda^{k+1}`.
pub fn translated_arc(d: &PathDescriptor, k: u64) -> Result<LiftedPath> {
    iterated_arc(d, k, k)
}

fn check_dimension(path: &LiftedPath, cycle: &IndexCycle) -> Result<()> {
    if path.dimension() != cycle.dimension() {
        return Err(Error::DimensionMismatch {
            expected: cycle.dimension(),
            found: path.dimension(),
        });
    }
    Ok(())
}

/// Signed crossings of one segment, assuming general position was checked.
fn segment_crossings(start: &[Rational], end: &[Rational], weights: &[i64]) -> i64 {
    weights
        .iter()
        .zip(start.iter().zip(end))
        .filter(|(w, _)| **w != 0)
        .map(|(w, (s, e))| w * (wall_index(e) - wall_index(s)))
        .sum()
}

/// Intersection index `<path, T>`.
///
/// Only walls with non-zero weight belong to `T`; vertices on such a wall and
/// segments running inside one are rejected.
pub fn path_intersection(path: &LiftedPath, cycle: &IndexCycle) -> Result<i64> {
    check_dimension(path, cycle)?;
    let weights = cycle.weights();
    for (segment, pair) in path.points.windows(2).enumerate() {
        for (coordinate, w) in weights.iter().enumerate() {
            let (s, e) = (&pair[0][coordinate], &pair[1][coordinate]);
            if *w != 0 && s == e && is_even_integer(s) {
                return Err(Error::DegenerateSegment {
                    segment,
                    coordinate,
                });
            }
        }
    }
    for (vertex, point) in path.points.iter().enumerate() {
        for (coordinate, w) in weights.iter().enumerate() {
            if *w != 0 && is_even_integer(&point[coordinate]) {
                return Err(Error::EndpointOnCycle { vertex, coordinate });
            }
        }
    }
    Ok(path
        .points
        .windows(2)
        .map(|pair| segment_crossings(&pair[0], &pair[1], weights))
        .sum())
}

/// `<lambda^k A, T>`; twice this value is the index jump `mu'_k`.
pub fn arc_intersection(d: &PathDescriptor, k: u64) -> Result<i64> {
    if !d.is_elliptic_only() {
        return Err(Error::NotElliptic);
    }
    path_intersection(&translated_arc(d, k)?, &IndexCycle::of(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcViolation {
    /// First arc `lambda^k A`.
    pub k: u64,
    /// Last arc `lambda^m A`.
    pub m: u64,
    pub intersection: i64,
    /// `sum_{j=k}^{m} mu'_j / 2`.
    pub half_jump_sum: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcDetails {
    pub l: u64,
    pub horizon: u64,
    pub arcs_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub passed: bool,
    pub first_violation: Option<ArcViolation>,
    pub details: ArcDetails,
}

/// Checks `l | <alpha, T>` and `<alpha, T> = sum mu'_j / 2` for every iterated
/// arc `alpha = lambda^k A ∪ ... ∪ lambda^m A`, `1 <= k <= m <= k_max`.
pub fn verify_intersect_divisibility(
    d: &PathDescriptor,
    l: NonZeroU64,
    k_max: u64,
) -> Result<IntersectionReport> {
    if !d.is_elliptic_only() {
        return Err(Error::NotElliptic);
    }
    if !check_condition_b(d, l).holds {
        return Err(Error::HypothesisNotMet { l: l.get() });
    }
    let jumps = jump_sequence(d, k_max)?;
    let mut prefix = vec![0i64];
    for &j in jumps.values() {
        prefix.push(prefix.last().unwrap() + j);
    }
    let cycle = IndexCycle::of(d);
    let step = angles(d);
    let divisor = l.get() as i64;
    let mut arcs_checked = 0;
    let mut first_violation = None;

    'outer: for k in 1..=k_max {
        let full = path_intersection(&iterated_arc(d, k, k_max)?, &cycle)?;
        let mut current = eigenvalue_vector(d, k)?.coordinates;
        let mut acc = 0i64;
        for m in k..=k_max {
            let next: Vec<Rational> = current.iter().zip(&step).map(|(x, t)| x + t).collect();
            acc += segment_crossings(&current, &next, cycle.weights());
            current = next;
            arcs_checked += 1;
            let half_jump_sum = (prefix[m as usize] - prefix[k as usize - 1]) / 2;
            let consistent = m < k_max || acc == full;
            if acc % divisor != 0 || acc != half_jump_sum || !consistent {
                first_violation = Some(ArcViolation {
                    k,
                    m,
                    intersection: acc,
                    half_jump_sum,
                });
                break 'outer;
            }
        }
    }
    Ok(IntersectionReport {
        passed: first_violation.is_none(),
        first_violation,
        details: ArcDetails {
            l: l.get(),
            horizon: k_max,
            arcs_checked,
        },
    })
}
