//! Seeded random families of descriptors and rotations.
//!
//! Every draw goes through the same validation as file input, so generated
//! instances are exactly the ones a user could write down. Draws that fail
//! validation are resampled and counted.

use czlab_core::{
    make_rotation, validate_descriptor, validate_right_limit, DescriptorSpec, EllipticSpec,
    PathDescriptor, Rational, Rotation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Draws allowed per accepted instance before the family counts as exhausted
/// (a rejection rate above 99%).
pub const ATTEMPTS_PER_INSTANCE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HorizonMode {
    /// Angles certified non-degenerate up to this iterate.
    Certified(u64),
    /// Angles read as right limits; no horizon.
    RightLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorFamily {
    pub min_den: i64,
    pub max_den: i64,
    pub max_entries: usize,
    pub max_multiplicity: u64,
    /// Loop parts are even numbers in `[-2h, 2h]`.
    pub max_half_loop: i64,
    pub max_mult_minus_one: u64,
    pub max_hyperbolic: u64,
    pub min_half_dimension: u64,
    pub max_half_dimension: u64,
    pub horizon: HorizonMode,
    /// When at least 2, half the draws are forced to satisfy condition (b)
    /// for a random `l` in `2..=divisor_max`.
    pub divisor_max: u64,
    pub elliptic_only: bool,
    /// Reject draws with neither elliptic nor negative-hyperbolic part.
    pub weakly_non_degenerate: bool,
}

impl Default for DescriptorFamily {
    fn default() -> Self {
        DescriptorFamily {
            min_den: 2,
            max_den: 50,
            max_entries: 3,
            max_multiplicity: 2,
            max_half_loop: 2,
            max_mult_minus_one: 1,
            max_hyperbolic: 1,
            min_half_dimension: 1,
            max_half_dimension: 3,
            horizon: HorizonMode::Certified(20),
            divisor_max: 0,
            elliptic_only: false,
            weakly_non_degenerate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationFamily {
    pub min_n: usize,
    pub max_n: usize,
    /// Raw angles are `p / q` with `0 <= p < q` and `q` drawn from
    /// `min_den..=max_den` once per rotation.
    pub min_den: i64,
    pub max_den: i64,
    pub horizon: u64,
}

impl Default for RotationFamily {
    fn default() -> Self {
        RotationFamily {
            min_n: 1,
            max_n: 3,
            min_den: 20,
            max_den: 20,
            horizon: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Descriptor(DescriptorFamily),
    Rotation(RotationFamily),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Descriptor(PathDescriptor),
    Rotation(Rotation),
}

impl Instance {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Instance::Descriptor(d) => serde_json::to_value(d.to_spec()),
            Instance::Rotation(r) => serde_json::to_value(r.to_spec()),
        }
        .expect("specs serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated<T> {
    pub instances: Vec<T>,
    pub rejected: usize,
}

/// Deterministic stream of validated draws from one seed.
pub struct Sampler {
    rng: ChaCha8Rng,
    accepted: usize,
    rejected: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            accepted: 0,
            rejected: 0,
        }
    }

    pub fn stats(&self) -> GenerationStats {
        GenerationStats {
            accepted: self.accepted,
            rejected: self.rejected,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn retry<T>(&mut self, mut draw: impl FnMut(&mut ChaCha8Rng) -> Option<T>) -> CliResult<T> {
        for _ in 0..ATTEMPTS_PER_INSTANCE {
            if let Some(x) = draw(&mut self.rng) {
                self.accepted += 1;
                return Ok(x);
            }
            self.rejected += 1;
        }
        Err(CliError::FamilyExhausted {
            accepted: self.accepted,
            rejected: self.rejected,
            attempts: self.accepted + self.rejected,
        })
    }

    pub fn descriptor(&mut self, family: &DescriptorFamily) -> CliResult<PathDescriptor> {
        self.retry(|rng| draw_descriptor(rng, family))
    }

    pub fn rotation(&mut self, family: &RotationFamily) -> CliResult<Rotation> {
        self.retry(|rng| draw_rotation(rng, family))
    }

    /// Single elliptic pair `(theta, 1, +-1)` with the loop part in
    /// `[-2h, 2h]`, the two-dimensional model.
    pub fn elliptic_pair(&mut self, family: &DescriptorFamily) -> CliResult<PathDescriptor> {
        let pair = DescriptorFamily {
            max_entries: 1,
            max_multiplicity: 1,
            max_mult_minus_one: 0,
            max_hyperbolic: 0,
            min_half_dimension: 1,
            max_half_dimension: 1,
            divisor_max: 0,
            elliptic_only: false,
            weakly_non_degenerate: false,
            ..family.clone()
        };
        self.descriptor(&pair)
    }
}

fn draw_descriptor(rng: &mut ChaCha8Rng, family: &DescriptorFamily) -> Option<PathDescriptor> {
    let divisor = if family.divisor_max >= 2 && rng.gen_bool(0.5) {
        Some(rng.gen_range(2..=family.divisor_max))
    } else {
        None
    };
    let count = rng.gen_range(0..=family.max_entries);
    let mut elliptic = Vec::with_capacity(count);
    for _ in 0..count {
        let q = rng.gen_range(family.min_den..=family.max_den);
        let p = rng.gen_range(1..q);
        let (multiplicity, signature) = match divisor {
            None => {
                let m = rng.gen_range(1..=family.max_multiplicity);
                (m, m as i64 - 2 * rng.gen_range(0..=m) as i64)
            }
            Some(l) => {
                let s = rng.gen_range(-1i64..=1) * l as i64;
                let m = s.unsigned_abs() + 2 * rng.gen_range(0..=1);
                (if m == 0 { 2 } else { m }, s)
            }
        };
        elliptic.push(EllipticSpec {
            theta_num: p,
            theta_den: q,
            multiplicity,
            signature,
        });
    }
    let (loop_index, mult_minus_one, hyperbolic_pairs) = if family.elliptic_only {
        (0, 0, 0)
    } else {
        let h = family.max_half_loop;
        let hyperbolic = rng.gen_range(0..=family.max_hyperbolic);
        match divisor {
            None => (
                2 * rng.gen_range(-h..=h),
                rng.gen_range(0..=family.max_mult_minus_one),
                hyperbolic,
            ),
            Some(l) => {
                // loop + mult_-1 a multiple of 2l, with an even mult_-1
                let mult = 2 * rng.gen_range(0..=family.max_mult_minus_one / 2);
                let c = rng.gen_range(-1i64..=1);
                (2 * l as i64 * c - mult as i64, mult, hyperbolic)
            }
        }
    };
    let spec = DescriptorSpec {
        loop_index,
        mult_minus_one,
        hyperbolic_pairs,
        elliptic,
        horizon: match family.horizon {
            HorizonMode::Certified(k) => k,
            HorizonMode::RightLimit => 0,
        },
        right_limit: family.horizon == HorizonMode::RightLimit,
    };
    let d = match family.horizon {
        HorizonMode::Certified(k) => validate_descriptor(&spec, k),
        HorizonMode::RightLimit => validate_right_limit(&spec),
    }
    .ok()?;
    let n = d.half_dimension();
    let sized = (family.min_half_dimension..=family.max_half_dimension).contains(&n);
    let weak = !family.weakly_non_degenerate || d.is_weakly_non_degenerate();
    (sized && weak).then_some(d)
}

fn draw_rotation(rng: &mut ChaCha8Rng, family: &RotationFamily) -> Option<Rotation> {
    let n = rng.gen_range(family.min_n..=family.max_n);
    let q = rng.gen_range(family.min_den..=family.max_den);
    let raw: Vec<Rational> = (0..=n)
        .map(|_| Rational::new(rng.gen_range(0..q), q))
        .collect();
    make_rotation(n, &raw, family.horizon).ok()
}

/// `trials` validated instances from `family`, identical for identical seeds.
pub fn generate_instances(seed: u64, trials: usize, family: &Family) -> CliResult<Generated<Instance>> {
    let mut sampler = Sampler::new(seed);
    let instances = (0..trials)
        .map(|_| match family {
            Family::Descriptor(f) => sampler.descriptor(f).map(Instance::Descriptor),
            Family::Rotation(f) => sampler.rotation(f).map(Instance::Rotation),
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Generated {
        instances,
        rejected: sampler.rejected,
    })
}
