//! Iteration-determining invariants of a strongly non-degenerate path.
//!
//! A path `Phi` splits as a loop `phi` composed with
//! `Phi_h (+) Phi_-h (+) Phi_e`. Its iterated Conley-Zehnder indices depend
//! only on `loop(Phi)`, `mult_-1(Phi)` and the decorated elliptic spectrum,
//! which is exactly what [`PathDescriptor`] stores.

use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Horizon};
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecoratedEigenvalue {
    angle: Angle,
    multiplicity: u64,
    signature: i64,
}

impl DecoratedEigenvalue {
    /// `multiplicity` counts eigenvalue pairs; `signature = p - q` with
    /// `p + q = multiplicity`.
    pub fn new(angle: Angle, multiplicity: u64, signature: i64) -> Result<Self> {
        let fits = multiplicity > 0
            && signature.unsigned_abs() <= multiplicity
            && (multiplicity - signature.unsigned_abs()).is_multiple_of(2);
        if !fits {
            return Err(Error::SignatureParityError {
                multiplicity,
                signature,
            });
        }
        Ok(DecoratedEigenvalue {
            angle,
            multiplicity,
            signature,
        })
    }

    pub fn angle(&self) -> &Angle {
        &self.angle
    }

    pub fn theta(&self) -> Rational {
        self.angle.value()
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn signature(&self) -> i64 {
        self.signature
    }
}

/// Validated descriptor. Elliptic entries are sorted by angle with distinct
/// angles; equal descriptors are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathDescriptor {
    loop_index: i64,
    mult_minus_one: u64,
    hyperbolic_pairs: u64,
    elliptic: Vec<DecoratedEigenvalue>,
}

impl PathDescriptor {
    /// Builds a descriptor, merging entries that share an angle (multiplicities
    /// and signatures add, horizons take the minimum).
    pub fn new(
        loop_index: i64,
        mult_minus_one: u64,
        hyperbolic_pairs: u64,
        elliptic: Vec<DecoratedEigenvalue>,
    ) -> Result<Self> {
        if loop_index % 2 != 0 {
            return Err(Error::OddLoopError(loop_index));
        }
        let mut entries = elliptic;
        entries.sort_by_key(|e| e.theta());
        let mut merged: Vec<DecoratedEigenvalue> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if last.theta() == e.theta() => {
                    let horizon = last.angle.horizon().min(e.angle.horizon());
                    *last = DecoratedEigenvalue::new(
                        last.angle.restricted(horizon),
                        last.multiplicity + e.multiplicity,
                        last.signature + e.signature,
                    )?;
                }
                _ => merged.push(DecoratedEigenvalue::new(e.angle, e.multiplicity, e.signature)?),
            }
        }
        Ok(PathDescriptor {
            loop_index,
            mult_minus_one,
            hyperbolic_pairs,
            elliptic: merged,
        })
    }

    /// Dimension zero; the identity for [`direct_sum`].
    pub fn empty() -> Self {
        PathDescriptor {
            loop_index: 0,
            mult_minus_one: 0,
            hyperbolic_pairs: 0,
            elliptic: Vec::new(),
        }
    }

    pub fn loop_index(&self) -> i64 {
        self.loop_index
    }

    pub fn mult_minus_one(&self) -> u64 {
        self.mult_minus_one
    }

    pub fn hyperbolic_pairs(&self) -> u64 {
        self.hyperbolic_pairs
    }

    pub fn elliptic(&self) -> &[DecoratedEigenvalue] {
        &self.elliptic
    }

    /// `loop + mult_-1`, the first index jump.
    pub fn loop_plus_mult(&self) -> i64 {
        self.loop_index + self.mult_minus_one as i64
    }

    pub fn total_dimension(&self) -> u64 {
        let elliptic: u64 = self.elliptic.iter().map(|e| e.multiplicity).sum();
        2 * (self.hyperbolic_pairs + self.mult_minus_one + elliptic)
    }

    /// Half the total dimension.
    pub fn half_dimension(&self) -> u64 {
        self.total_dimension() / 2
    }

    /// Smallest horizon over the elliptic angles, `Unbounded` when there are none.
    pub fn horizon(&self) -> Horizon {
        self.elliptic
            .iter()
            .map(|e| e.angle.horizon())
            .min()
            .unwrap_or(Horizon::Unbounded)
    }

    /// No loop, negative-hyperbolic or hyperbolic part.
    pub fn is_elliptic_only(&self) -> bool {
        self.loop_index == 0 && self.mult_minus_one == 0 && self.hyperbolic_pairs == 0
    }

    /// Elliptic spectrum non-empty or a negative-hyperbolic block present.
    pub fn is_weakly_non_degenerate(&self) -> bool {
        !self.elliptic.is_empty() || self.mult_minus_one > 0
    }

    /// The invariants the jump sequence determines: `loop + mult_-1` and the
    /// angles carrying non-zero signature.
    pub fn decorated_spectrum(&self) -> (i64, Vec<(Rational, i64)>) {
        let spectrum = self
            .elliptic
            .iter()
            .filter(|e| e.signature != 0)
            .map(|e| (e.theta(), e.signature))
            .collect();
        (self.loop_plus_mult(), spectrum)
    }

    /// Lowest common denominator of the elliptic angles.
    pub fn common_denominator(&self) -> i64 {
        let thetas: Vec<Rational> = self.elliptic.iter().map(|e| e.theta()).collect();
        crate::rational::common_denominator(&thetas)
    }

    pub fn to_spec(&self) -> DescriptorSpec {
        let horizon = self.horizon();
        DescriptorSpec {
            loop_index: self.loop_index,
            mult_minus_one: self.mult_minus_one,
            hyperbolic_pairs: self.hyperbolic_pairs,
            elliptic: self
                .elliptic
                .iter()
                .map(|e| EllipticSpec {
                    theta_num: *e.theta().numer(),
                    theta_den: *e.theta().denom(),
                    multiplicity: e.multiplicity,
                    signature: e.signature,
                })
                .collect(),
            horizon: horizon.finite().unwrap_or(0),
            right_limit: horizon == Horizon::Unbounded && !self.elliptic.is_empty(),
        }
    }
}

/// JSON form of a descriptor.
///
/// `right_limit` is an optional extension: when true the angles are read as
/// right limits and `horizon` is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorSpec {
    #[serde(rename = "loop")]
    pub loop_index: i64,
    pub mult_minus_one: u64,
    pub hyperbolic_pairs: u64,
    pub elliptic: Vec<EllipticSpec>,
    pub horizon: u64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub right_limit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticSpec {
    pub theta_num: i64,
    pub theta_den: i64,
    pub multiplicity: u64,
    pub signature: i64,
}

impl DescriptorSpec {
    pub fn validate(&self) -> Result<PathDescriptor> {
        if self.right_limit {
            build(self, Horizon::Unbounded)
        } else {
            validate_descriptor(self, self.horizon)
        }
    }
}

/// Checks every invariant for horizon `k_max` and returns the canonical
/// descriptor.
pub fn validate_descriptor(spec: &DescriptorSpec, k_max: u64) -> Result<PathDescriptor> {
    build(spec, Horizon::Finite(k_max))
}

/// Validates with right-limit angles, so every iterate is admissible.
pub fn validate_right_limit(spec: &DescriptorSpec) -> Result<PathDescriptor> {
    build(spec, Horizon::Unbounded)
}

fn build(spec: &DescriptorSpec, horizon: Horizon) -> Result<PathDescriptor> {
    if spec.loop_index % 2 != 0 {
        return Err(Error::OddLoopError(spec.loop_index));
    }
    let elliptic = spec
        .elliptic
        .iter()
        .map(|e| {
            let theta = ratio(e.theta_num, e.theta_den)?;
            let angle = Angle::with_horizon(theta, horizon)?;
            DecoratedEigenvalue::new(angle, e.multiplicity, e.signature)
        })
        .collect::<Result<Vec<_>>>()?;
    PathDescriptor::new(spec.loop_index, spec.mult_minus_one, spec.hyperbolic_pairs, elliptic)
}

/// Direct sum: every invariant adds, shared angles merge.
pub fn direct_sum(d1: &PathDescriptor, d2: &PathDescriptor) -> Result<PathDescriptor> {
    let elliptic = d1.elliptic.iter().chain(&d2.elliptic).copied().collect();
    PathDescriptor::new(
        d1.loop_index + d2.loop_index,
        d1.mult_minus_one + d2.mult_minus_one,
        d1.hyperbolic_pairs + d2.hyperbolic_pairs,
        elliptic,
    )
}

/// Descriptor of the inverse transformation.
///
/// `loop + mult_-1` and every signature change sign. `mult_-1` is kept and the
/// loop absorbs the sign: `loop' = -loop - 2 mult_-1`.
pub fn inverse(d: &PathDescriptor) -> PathDescriptor {
    PathDescriptor {
        loop_index: -d.loop_index - 2 * d.mult_minus_one as i64,
        mult_minus_one: d.mult_minus_one,
        hyperbolic_pairs: d.hyperbolic_pairs,
        elliptic: d
            .elliptic
            .iter()
            .map(|e| DecoratedEigenvalue {
                signature: -e.signature,
                ..*e
            })
            .collect(),
    }
}
