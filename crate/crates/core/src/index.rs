//! Conley-Zehnder index and jump sequences, the divisibility conditions and
//! reconstruction from jumps.
//!
//! The jump of the index between iterates `k` and `k + 1` is
//!
//! ```text
//! mu'_k = loop + mult_-1 + 2 * sum_lambda a_lambda(k) * sgn_lambda
//! a_lambda(k) = floor((k + 1) theta / 2) - floor(k theta / 2)  in {0, 1}
//! ```

use std::num::NonZeroU64;

use serde::Serialize;

use crate::angle::Angle;
use crate::descriptor::PathDescriptor;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `a_lambda(k)`: 1 when the eigenvalue jumps at `k`.
pub fn jump_a(angle: &Angle, k: u64) -> Result<u8> {
    if k == 0 {
        return Err(Error::ZeroIterate);
    }
    angle.horizon().check(k + 1)?;
    Ok(jump_indicator(angle, k))
}

fn jump_indicator(angle: &Angle, k: u64) -> u8 {
    (angle.half_floor(k + 1) - angle.half_floor(k)) as u8
}

/// `mu(Phi) = loop + mult_-1 + sum sgn_lambda`.
pub fn cz_index(d: &PathDescriptor) -> i64 {
    d.loop_plus_mult() + d.elliptic().iter().map(|e| e.signature()).sum::<i64>()
}

/// `hmu(Phi) = loop + mult_-1 + sum sgn_lambda * theta_lambda`.
pub fn mean_index(d: &PathDescriptor) -> Rational {
    d.elliptic().iter().fold(
        Rational::from_integer(d.loop_plus_mult()),
        |acc, e| acc + e.theta() * e.signature(),
    )
}

/// `mu'_k`, unchecked against the horizon.
fn jump_at(d: &PathDescriptor, k: u64) -> i64 {
    let elliptic: i64 = d
        .elliptic()
        .iter()
        .map(|e| i64::from(jump_indicator(e.angle(), k)) * e.signature())
        .sum();
    d.loop_plus_mult() + 2 * elliptic
}

/// `mu'_1, ..., mu'_K` with `mu'_k = mu_{k+1} - mu_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpSequence {
    values: Vec<i64>,
}

impl JumpSequence {
    pub fn from_values(values: Vec<i64>) -> Self {
        JumpSequence { values }
    }

    pub fn horizon(&self) -> u64 {
        self.values.len() as u64
    }

    /// `mu'_k` for `1 <= k <= horizon`.
    pub fn get(&self, k: u64) -> Option<i64> {
        k.checked_sub(1).and_then(|i| self.values.get(i as usize)).copied()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// `mu_1, ..., mu_K` with `mu_k = mu(Phi^k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSequence {
    values: Vec<i64>,
}

impl IndexSequence {
    pub fn horizon(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn get(&self, k: u64) -> Option<i64> {
        k.checked_sub(1).and_then(|i| self.values.get(i as usize)).copied()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// Jump sequence over `1..=k_max`; needs the descriptor certified to `k_max + 1`.
pub fn jump_sequence(d: &PathDescriptor, k_max: u64) -> Result<JumpSequence> {
    d.horizon().check(k_max + 1)?;
    Ok(JumpSequence {
        values: (1..=k_max).map(|k| jump_at(d, k)).collect(),
    })
}

/// Index sequence over `1..=k_max`: `mu_1 = cz_index(d)`, then prefix sums of
/// the jumps.
pub fn index_sequence(d: &PathDescriptor, k_max: u64) -> Result<IndexSequence> {
    d.horizon().check(k_max)?;
    let mut values = Vec::with_capacity(k_max as usize);
    let mut mu = cz_index(d);
    for k in 1..=k_max {
        values.push(mu);
        if k < k_max {
            mu += jump_at(d, k);
        }
    }
    Ok(IndexSequence { values })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivisibilityFailure {
    /// `2l` does not divide `loop + mult_-1`.
    LoopPlusMult { value: i64, modulus: u64 },
    /// `l` does not divide the signature at `theta`.
    Signature {
        #[serde(with = "crate::rational::as_string")]
        theta: Rational,
        signature: i64,
        modulus: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionB {
    pub l: u64,
    pub holds: bool,
    pub failures: Vec<DivisibilityFailure>,
}

/// Condition (b): `2l | loop + mult_-1` and `l | sgn_lambda` for every
/// eigenvalue. Zero signatures always pass.
pub fn check_condition_b(d: &PathDescriptor, l: NonZeroU64) -> ConditionB {
    let l = l.get();
    let mut failures = Vec::new();
    let lpm = d.loop_plus_mult();
    if lpm.rem_euclid(2 * l as i64) != 0 {
        failures.push(DivisibilityFailure::LoopPlusMult {
            value: lpm,
            modulus: 2 * l,
        });
    }
    for e in d.elliptic() {
        if e.signature().rem_euclid(l as i64) != 0 {
            failures.push(DivisibilityFailure::Signature {
                theta: e.theta(),
                signature: e.signature(),
                modulus: l,
            });
        }
    }
    ConditionB {
        l,
        holds: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionA {
    /// `2l | mu'_k` for every `k <= horizon`.
    HoldsUpTo { horizon: u64 },
    /// First `k` with `2l` not dividing `mu'_k`.
    Witness { k: u64, jump: i64 },
}

impl ConditionA {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionA::HoldsUpTo { .. })
    }
}

/// Condition (a) scanned over `1..=k_max`, stopping at the first witness.
pub fn check_condition_a(d: &PathDescriptor, l: NonZeroU64, k_max: u64) -> Result<ConditionA> {
    d.horizon().check(k_max + 1)?;
    let modulus = 2 * l.get() as i64;
    for k in 1..=k_max {
        let jump = jump_at(d, k);
        if jump.rem_euclid(modulus) != 0 {
            return Ok(ConditionA::Witness { k, jump });
        }
    }
    Ok(ConditionA::HoldsUpTo { horizon: k_max })
}

/// Witness search bound `4 l D`, `D` the common denominator of the angles.
pub fn witness_search_bound(d: &PathDescriptor, l: NonZeroU64) -> u64 {
    4 * l.get() * d.common_denominator() as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reconstruction<'a> {
    Unique {
        index: usize,
        descriptor: &'a PathDescriptor,
    },
    /// Several members reproduce the jumps over the whole horizon.
    Ambiguous { indices: Vec<usize> },
}

/// Finds the pool member whose jump sequence equals `jumps`.
pub fn reconstruct_from_jumps<'a>(
    jumps: &JumpSequence,
    pool: &'a [PathDescriptor],
) -> Result<Reconstruction<'a>> {
    let k_max = jumps.horizon();
    let mut matches = Vec::new();
    for (index, member) in pool.iter().enumerate() {
        member.horizon().check(k_max + 1)?;
        let agrees = jumps
            .values()
            .iter()
            .zip(1..)
            .all(|(&jump, k)| jump_at(member, k) == jump);
        if agrees {
            matches.push(index);
        }
    }
    match matches.as_slice() {
        [] => Err(Error::NoMatch),
        &[index] => Ok(Reconstruction::Unique {
            index,
            descriptor: &pool[index],
        }),
        _ => Ok(Reconstruction::Ambiguous { indices: matches }),
    }
}

/// First `k <= k_max` where the two jump sequences differ.
pub fn first_jump_difference(a: &PathDescriptor, b: &PathDescriptor, k_max: u64) -> Result<Option<u64>> {
    a.horizon().check(k_max + 1)?;
    b.horizon().check(k_max + 1)?;
    Ok((1..=k_max).find(|&k| jump_at(a, k) != jump_at(b, k)))
}
