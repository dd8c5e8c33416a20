//! True rotations of `CP^n` and the spectral data of pseudo-rotations.
//!
//! A rotation is generated by `Q(z) = sum a_i |z_i|^2` with
//! `a_0 <= ... <= a_n` and `sum a_i = 0`, the symplectic form normalized to
//! give `CP^1` area 1. Its fixed points are the coordinate axes; with the
//! trivial capping the mean index at `x_i` is `2(n+1) a_i` and the action is
//! `a_i`, so the action spectrum is `⊔ (a_i + Z)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::descriptor::{DecoratedEigenvalue, DescriptorSpec, PathDescriptor};
use crate::error::{Error, Result};
use crate::index::{cz_index, index_sequence, mean_index};
use crate::rational::{floor, rem2, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rotation {
    n: usize,
    angles: Vec<Rational>,
    horizon: u64,
}

impl Rotation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[Rational] {
        &self.angles
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    fn period(&self) -> i64 {
        2 * (self.n as i64 + 1)
    }

    /// The representative whose angles are `n + 1` consecutive points of the
    /// action spectrum. Two rotations with the same action spectrum have the
    /// same normal form.
    pub fn normal_form(&self) -> Rotation {
        let size = self.n as i64 + 1;
        let mut fractional: Vec<Rational> = self.angles.iter().map(|a| a - a.floor()).collect();
        fractional.sort();
        let total: Rational = fractional.iter().sum();
        // sum a_i = 0 makes the fractional parts sum to an integer
        let target = -total.to_integer();
        let shift = target.div_euclid(size);
        let start = target.rem_euclid(size) as usize;
        let mut angles: Vec<Rational> = fractional[start..]
            .iter()
            .map(|c| c + shift)
            .chain(fractional[..start].iter().map(|c| c + shift + 1))
            .collect();
        angles.sort();
        Rotation {
            n: self.n,
            angles,
            horizon: self.horizon,
        }
    }

    pub fn is_normal(&self) -> bool {
        self.angles[self.n] - self.angles[0] < Rational::from_integer(1)
    }

    pub fn to_spec(&self) -> RotationSpec {
        RotationSpec {
            n: self.n,
            angles: self.angles.clone(),
            horizon: self.horizon,
        }
    }
}

/// JSON form `{"n": int, "angles": ["p/q", ...], "horizon": int}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub n: usize,
    #[serde(with = "crate::rational::vec_as_string")]
    pub angles: Vec<Rational>,
    pub horizon: u64,
}

impl RotationSpec {
    pub fn validate(&self) -> Result<Rotation> {
        make_rotation(self.n, &self.angles, self.horizon)
    }
}

/// Sorts, subtracts the mean and checks `k (a_i - a_j)` is never an integer
/// for `1 <= k <= horizon`.
pub fn make_rotation(n: usize, raw_angles: &[Rational], horizon: u64) -> Result<Rotation> {
    if n == 0 || raw_angles.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: raw_angles.len(),
        });
    }
    let mean: Rational = raw_angles.iter().sum::<Rational>() / (n as i64 + 1);
    let mut angles: Vec<Rational> = raw_angles.iter().map(|a| a - mean).collect();
    angles.sort();
    for i in 0..=n {
        for j in i + 1..=n {
            // k (a_j - a_i) first integral at k = reduced denominator
            let k = (angles[j] - angles[i]).denom().unsigned_abs();
            if k <= horizon.max(1) {
                return Err(Error::DegenerateRotation { i, j, k });
            }
        }
    }
    Ok(Rotation { n, angles, horizon })
}

/// Mean indices of the trivially capped fixed points, `2(n+1) a_i`.
pub fn trivial_mean_indices(r: &Rotation) -> Vec<Rational> {
    r.angles.iter().map(|a| a * r.period()).collect()
}

/// Conley-Zehnder indices of the trivially capped fixed points,
/// `sum_{j != i} (2 floor(a_i - a_j) + 1)`.
pub fn trivial_cz_indices(r: &Rotation) -> Vec<i64> {
    (0..=r.n)
        .map(|i| {
            (0..=r.n)
                .filter(|&j| j != i)
                .map(|j| 2 * floor(&(r.angles[i] - r.angles[j])) + 1)
                .sum()
        })
        .collect()
}

/// Capped mean indices `delta_i` of the fixed points of a pseudo-rotation,
/// ordered so that `x_i` has Conley-Zehnder index `2i - n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointTable {
    n: usize,
    delta: Vec<Rational>,
    descriptors: Option<Vec<PathDescriptor>>,
}

impl FixedPointTable {
    pub fn new(n: usize, delta: Vec<Rational>) -> Result<Self> {
        if n == 0 || delta.len() != n + 1 {
            return Err(Error::InvalidTable(format!(
                "expected {} mean indices for n = {n}, found {}",
                n + 1,
                delta.len()
            )));
        }
        let bound = Rational::from_integer(n as i64);
        for (i, d) in delta.iter().enumerate() {
            let index = Rational::from_integer(capped_index(n, i));
            if (d - index).abs() >= bound {
                return Err(Error::InvalidTable(format!(
                    "|delta_{i} - ({index})| = |{d} - ({index})| is not below {n}"
                )));
            }
        }
        if let Some(i) = (1..=n).find(|&i| delta[i] <= delta[i - 1]) {
            return Err(Error::InvalidTable(format!(
                "mean indices are not strictly increasing at position {i}"
            )));
        }
        Ok(FixedPointTable {
            n,
            delta,
            descriptors: None,
        })
    }

    /// Table with the linearized flow at each fixed point. Each descriptor must
    /// have dimension `2n`, index `2i - n` and mean index `delta_i`.
    pub fn with_descriptors(
        n: usize,
        delta: Vec<Rational>,
        descriptors: Vec<PathDescriptor>,
    ) -> Result<Self> {
        let mut table = FixedPointTable::new(n, delta)?;
        if descriptors.len() != n + 1 {
            return Err(Error::InvalidTable(format!(
                "expected {} descriptors, found {}",
                n + 1,
                descriptors.len()
            )));
        }
        for (i, d) in descriptors.iter().enumerate() {
            if d.total_dimension() != 2 * n as u64 {
                return Err(Error::InvalidTable(format!(
                    "descriptor {i} has dimension {}, expected {}",
                    d.total_dimension(),
                    2 * n
                )));
            }
            if cz_index(d) != capped_index(n, i) {
                return Err(Error::InvalidTable(format!(
                    "descriptor {i} has index {}, expected {}",
                    cz_index(d),
                    capped_index(n, i)
                )));
            }
            if mean_index(d) != table.delta[i] {
                return Err(Error::InvalidTable(format!(
                    "descriptor {i} has mean index {}, table says {}",
                    mean_index(d),
                    table.delta[i]
                )));
            }
        }
        table.descriptors = Some(descriptors);
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &[Rational] {
        &self.delta
    }

    pub fn descriptors(&self) -> Option<&[PathDescriptor]> {
        self.descriptors.as_deref()
    }

    pub fn to_spec(&self) -> TableSpec {
        TableSpec {
            n: self.n,
            delta: self.delta.clone(),
            descriptors: self
                .descriptors
                .as_ref()
                .map(|ds| ds.iter().map(PathDescriptor::to_spec).collect()),
        }
    }
}

/// `mu(x_i) = 2i - n`.
pub fn capped_index(n: usize, i: usize) -> i64 {
    2 * i as i64 - n as i64
}

/// JSON form `{"n": int, "delta": ["p/q", ...], "descriptors": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    pub n: usize,
    #[serde(with = "crate::rational::vec_as_string")]
    pub delta: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptors: Option<Vec<DescriptorSpec>>,
}

impl TableSpec {
    pub fn validate(&self) -> Result<FixedPointTable> {
        match &self.descriptors {
            None => FixedPointTable::new(self.n, self.delta.clone()),
            Some(specs) => {
                let descriptors = specs
                    .iter()
                    .map(DescriptorSpec::validate)
                    .collect::<Result<Vec<_>>>()?;
                FixedPointTable::with_descriptors(self.n, self.delta.clone(), descriptors)
            }
        }
    }
}

/// Linearized flow at `x_i` with the capping shifted by `shift` spheres.
///
/// Each partner `j` contributes the rotation `exp(2 pi i (a_i - a_j) t)`: its
/// first-type eigenvalue has logarithm `2(a_i - a_j)` reduced into `(-1, 1)`,
/// and the even remainder goes into the loop part.
fn linearized_descriptor(r: &Rotation, i: usize, shift: i64) -> Result<PathDescriptor> {
    let mut loop_index = -r.period() * shift;
    let mut elliptic = Vec::with_capacity(r.n);
    for j in (0..=r.n).filter(|&j| j != i) {
        let log = (r.angles[i] - r.angles[j]) * 2;
        let reduced = reduce_log(&log);
        loop_index += (log - reduced).to_integer();
        let signature = if reduced > Rational::zero() { 1 } else { -1 };
        let angle = Angle::new(reduced.abs(), r.horizon)?;
        elliptic.push(DecoratedEigenvalue::new(angle, 1, signature)?);
    }
    PathDescriptor::new(loop_index, 0, 0, elliptic)
}

/// `x mod 2` taken in `(-1, 1]`.
fn reduce_log(x: &Rational) -> Rational {
    let y = rem2(x);
    if y > Rational::from_integer(1) {
        y - 2
    } else {
        y
    }
}

/// Recaps every fixed point so its index lies in `[-n, n]` and returns the
/// table ordered by index.
///
/// The trivial index `mu_i` is moved by `2(n+1) m_i` into range; the mean
/// index moves with it. The shifted indices must be exactly
/// `-n, -n+2, ..., n` and the mean indices must sum to zero.
pub fn recapped_fixed_points(r: &Rotation) -> Result<FixedPointTable> {
    let n = r.n as i64;
    let period = r.period();
    let trivial = trivial_cz_indices(r);
    let mut points: Vec<(i64, Rational, usize, i64)> = trivial
        .iter()
        .enumerate()
        .map(|(i, &mu)| {
            let shift = (mu + n).div_euclid(period);
            let capped = mu - period * shift;
            let delta = (r.angles[i] - shift) * period;
            (capped, delta, i, shift)
        })
        .collect();
    points.sort_by_key(|p| p.0);

    let indices: Vec<i64> = points.iter().map(|p| p.0).collect();
    let expected: Vec<i64> = (0..=r.n).map(|i| capped_index(r.n, i)).collect();
    if indices != expected {
        return Err(Error::RecappingFailed(format!(
            "capped indices {indices:?} are not {expected:?}"
        )));
    }
    let delta: Vec<Rational> = points.iter().map(|p| p.1).collect();
    let sum: Rational = delta.iter().sum();
    if !sum.is_zero() {
        return Err(Error::RecappingFailed(format!("mean indices sum to {sum}")));
    }
    let descriptors: Option<Vec<PathDescriptor>> = points
        .iter()
        .map(|&(_, _, i, shift)| linearized_descriptor(r, i, shift).ok())
        .collect();
    let table = match descriptors {
        Some(ds) => FixedPointTable::with_descriptors(r.n, delta, ds),
        None => FixedPointTable::new(r.n, delta),
    };
    table.map_err(|e| Error::RecappingFailed(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MarkedPoint {
    pub label: i64,
    #[serde(with = "crate::rational::as_string")]
    pub value: Rational,
}

/// Window of the marked action spectrum; label `l` carries index `2l - n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSpectrum {
    n: usize,
    points: Vec<MarkedPoint>,
}

impl MarkedSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn index_of(&self, label: i64) -> i64 {
        2 * label - self.n as i64
    }

    pub fn value(&self, label: i64) -> Option<Rational> {
        self.points
            .iter()
            .find(|p| p.label == label)
            .map(|p| p.value)
    }
}

/// Value carrying `label` in the marked action spectrum of `r`:
/// `b_{l mod (n+1)} + floor(l / (n+1))` for the normal form `b`.
pub fn marked_value(r: &Rotation, label: i64) -> Rational {
    let normal = r.normal_form();
    let size = r.n as i64 + 1;
    normal.angles[label.rem_euclid(size) as usize] + label.div_euclid(size)
}

/// All points of `⊔ (a_i + Z)` in `[lo, hi]` with their labels.
pub fn action_spectrum(r: &Rotation, lo: Rational, hi: Rational) -> Result<MarkedSpectrum> {
    if lo >= hi {
        return Err(Error::InvalidWindow { lo, hi });
    }
    let normal = r.normal_form();
    let size = r.n as i64 + 1;
    for bound in [lo, hi] {
        if normal.angles.iter().any(|b| (bound - b).is_integer()) {
            return Err(Error::WindowOnSpectrum(bound));
        }
    }
    let mut points = Vec::new();
    for (i, b) in normal.angles.iter().enumerate() {
        let first = (lo - b).ceil().to_integer();
        let last = (hi - b).floor().to_integer();
        for m in first..=last {
            points.push(MarkedPoint {
                label: i as i64 + m * size,
                value: b + m,
            });
        }
    }
    points.sort_by_key(|p| p.label);
    if let Some(w) = points.windows(2).find(|w| w[1].value <= w[0].value) {
        return Err(Error::DuplicateAction(w[1].value));
    }
    Ok(MarkedSpectrum { n: r.n, points })
}

/// `sum delta_i = 0`.
pub fn is_balanced(t: &FixedPointTable) -> bool {
    t.delta.iter().sum::<Rational>().is_zero()
}

/// The rotation with `a_i = delta_i / 2(n+1)`, checked to reproduce `t`.
pub fn matching_rotation(t: &FixedPointTable, horizon: u64) -> Result<Rotation> {
    if !is_balanced(t) {
        return Err(Error::NotBalanced {
            sum: t.delta.iter().sum(),
        });
    }
    let period = 2 * (t.n as i64 + 1);
    let angles: Vec<Rational> = t.delta.iter().map(|d| d / period).collect();
    let rotation = make_rotation(t.n, &angles, horizon)?;
    let recapped = recapped_fixed_points(&rotation)
        .map_err(|e| Error::RoundTripMismatch(e.to_string()))?;
    if recapped.delta != t.delta {
        return Err(Error::RoundTripMismatch(format!(
            "recapped mean indices {:?} differ from the table",
            recapped.delta.iter().map(|d| d.to_string()).collect::<Vec<_>>()
        )));
    }
    Ok(rotation)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FloquetMultiplier {
    pub partner: usize,
    /// `2(a_i - a_j)`.
    #[serde(with = "crate::rational::as_string")]
    pub log: Rational,
    /// `log` reduced into `(-1, 1)`; its sign is the Krein orientation.
    #[serde(with = "crate::rational::as_string")]
    pub reduced: Rational,
}

/// First-type multipliers `exp(2 pi i (a_i - a_j))`, `j != i`, at `x_i`.
pub fn floquet_multipliers(r: &Rotation, i: usize) -> Result<Vec<FloquetMultiplier>> {
    if i > r.n {
        return Err(Error::DimensionMismatch {
            expected: r.n + 1,
            found: i + 1,
        });
    }
    (0..=r.n)
        .filter(|&j| j != i)
        .map(|j| {
            let log = (r.angles[i] - r.angles[j]) * 2;
            let reduced = reduce_log(&log);
            if reduced.is_zero() {
                return Err(Error::DegenerateRotation { i, j, k: 1 });
            }
            if reduced == Rational::from_integer(1) {
                return Err(Error::DegenerateRotation { i, j, k: 2 });
            }
            Ok(FloquetMultiplier {
                partner: j,
                log,
                reduced,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointMultipliers {
    pub point: usize,
    #[serde(with = "crate::rational::vec_as_string")]
    pub multipliers: Vec<Rational>,
    pub distinct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairOverlap {
    pub i: usize,
    pub j: usize,
    #[serde(with = "crate::rational::vec_as_string")]
    pub shared: Vec<Rational>,
    pub disjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub holds: bool,
    pub points: Vec<PointMultipliers>,
    pub pairs: Vec<PairOverlap>,
}

/// Distinct-multiplier hypothesis for the matching rotation: the first-type
/// multipliers `exp(2 pi i (delta_i - delta_j) / 2(n+1))`, `i != j`, are
/// pairwise distinct points of the circle.
///
/// Multipliers are compared by their reduced logarithm in `(-1, 1)`; a value
/// and its conjugate are different points.
pub fn check_matching_hypotheses(t: &FixedPointTable, horizon: u64) -> Result<MatchingReport> {
    let rotation = matching_rotation(t, horizon)?;
    let mut points = Vec::with_capacity(t.n + 1);
    for i in 0..=t.n {
        let mut multipliers: Vec<Rational> = floquet_multipliers(&rotation, i)?
            .into_iter()
            .map(|m| m.reduced)
            .collect();
        multipliers.sort();
        let distinct = multipliers.windows(2).all(|w| w[0] != w[1]);
        points.push(PointMultipliers {
            point: i,
            multipliers,
            distinct,
        });
    }
    let mut pairs = Vec::new();
    for i in 0..=t.n {
        for j in i + 1..=t.n {
            let shared: Vec<Rational> = points[i]
                .multipliers
                .iter()
                .filter(|v| points[j].multipliers.contains(v))
                .copied()
                .collect();
            pairs.push(PairOverlap {
                i,
                j,
                disjoint: shared.is_empty(),
                shared,
            });
        }
    }
    let holds = points.iter().all(|p| p.distinct) && pairs.iter().all(|p| p.disjoint);
    Ok(MatchingReport {
        holds,
        points,
        pairs,
    })
}

/// Every non-zero `r` with `|r_i| <= bound` and
/// `sum r_i delta_i ≡ 0 (mod 2(n+1))`, in lexicographic order.
pub fn resonance_lattice(t: &FixedPointTable, bound: u32) -> Vec<Vec<i64>> {
    let bound = i64::from(bound);
    let period = Rational::from_integer(2 * (t.n as i64 + 1));
    let size = t.n + 1;
    let mut found = Vec::new();
    let mut current = vec![-bound; size];
    loop {
        if current.iter().any(|&c| c != 0) {
            let total: Rational = current
                .iter()
                .zip(&t.delta)
                .map(|(&c, d)| d * c)
                .sum();
            if (total / period).is_integer() {
                found.push(current.clone());
            }
        }
        // odometer increment
        let mut pos = size;
        loop {
            if pos == 0 {
                return found;
            }
            pos -= 1;
            if current[pos] < bound {
                current[pos] += 1;
                break;
            }
            current[pos] = -bound;
        }
    }
}

/// `phi_Q` is the identity in the universal cover: after normalizing
/// `sum a_i = 0`, all `a_i - a_j` and `(n+1) a_i` are integers.
pub fn is_trivial_loop(n: usize, raw_angles: &[Rational]) -> bool {
    if raw_angles.len() != n + 1 {
        return false;
    }
    let mean: Rational = raw_angles.iter().sum::<Rational>() / (n as i64 + 1);
    let a: Vec<Rational> = raw_angles.iter().map(|x| x - mean).collect();
    let differences_integral = a.iter().all(|x| (x - a[0]).is_integer());
    differences_integral && (a[0] * (n as i64 + 1)).is_integer()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntisymmetryReport {
    pub passed: bool,
    pub first_violation: Option<u64>,
    pub mean_antisymmetric: bool,
    pub mutual_inverse: bool,
    pub horizon: u64,
}

fn check_two_dimensional(d: &PathDescriptor) -> Result<()> {
    let elliptic = d.mult_minus_one() == 0 && d.hyperbolic_pairs() == 0;
    if !elliptic || d.total_dimension() != 2 {
        return Err(Error::WrongDimension {
            dimension: d.total_dimension(),
        });
    }
    Ok(())
}

/// Checks `mu(x_1^k) = -mu(x_0^k)` for `k <= k_max` on two-dimensional
/// elliptic data.
pub fn s2_antisymmetry_check(
    d0: &PathDescriptor,
    d1: &PathDescriptor,
    k_max: u64,
) -> Result<AntisymmetryReport> {
    check_two_dimensional(d0)?;
    check_two_dimensional(d1)?;
    let mu0 = index_sequence(d0, k_max)?;
    let mu1 = index_sequence(d1, k_max)?;
    let first_violation = mu0
        .values()
        .iter()
        .zip(mu1.values())
        .position(|(a, b)| *b != -*a)
        .map(|p| p as u64 + 1);
    Ok(AntisymmetryReport {
        passed: first_violation.is_none(),
        first_violation,
        mean_antisymmetric: mean_index(d1) == -mean_index(d0),
        mutual_inverse: same_invariants(&crate::descriptor::inverse(d0), d1),
        horizon: k_max,
    })
}

fn same_invariants(a: &PathDescriptor, b: &PathDescriptor) -> bool {
    a.loop_index() == b.loop_index()
        && a.mult_minus_one() == b.mult_minus_one()
        && a.elliptic().len() == b.elliptic().len()
        && a.elliptic().iter().zip(b.elliptic()).all(|(x, y)| {
            x.theta() == y.theta()
                && x.multiplicity() == y.multiplicity()
                && x.signature() == y.signature()
        })
}
