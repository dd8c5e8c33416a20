//! Seeded verification suites.
//!
//! Instances are drawn sequentially from one seed, then checked in parallel;
//! results are collected in trial order so reports are byte-identical across
//! runs. A failing trial carries its instance, shrunk when that is cheap.

use std::num::NonZeroU64;

use clap::ValueEnum;
use czlab_core::index::{first_jump_difference, witness_search_bound};
use czlab_core::rational::common_denominator;
use czlab_core::{
    arc_intersection, check_condition_a, check_condition_b, cz_index, index_sequence, inverse,
    jump_sequence, matching_rotation, mean_index, recapped_fixed_points, reconstruct_from_jumps,
    s2_antisymmetry_check, verify_intersect_divisibility, Angle, DecoratedEigenvalue,
    PathDescriptor, Rational, Reconstruction, Rotation,
};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::families::{DescriptorFamily, HorizonMode, RotationFamily, Sampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Index sequences against the closed form and the jump prefix sums.
    Oracle,
    /// Divisibility of jumps against the signature conditions, both ways.
    Theorem,
    /// Recovery of a pool member from its jump sequence.
    Reconstruct,
    /// Twice the arc intersection number equals the jump.
    MuIntersect,
    /// Divisibility of iterated-arc intersection numbers.
    Intersect,
    /// Recapped mean indices sum to zero; matching undoes recapping.
    Rotation,
    /// Distance between index and iterated mean index.
    Bound,
    /// Index antisymmetry for two-dimensional inverse pairs.
    S2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub detail: String,
    pub instance: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub rejected_draws: usize,
    /// Individual equalities or divisibilities checked.
    pub checks: u64,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

type Check = Result<u64, (String, Value)>;

fn collect<T: Sync>(
    suite: Suite,
    seed: u64,
    rejected: usize,
    instances: &[T],
    check: impl Fn(&T) -> Check + Sync + Send,
) -> SuiteReport {
    let results: Vec<Check> = instances.par_iter().map(check).collect();
    let mut report = SuiteReport {
        suite,
        seed,
        trials: instances.len(),
        passed: 0,
        failed: 0,
        rejected_draws: rejected,
        checks: 0,
        failures: Vec::new(),
    };
    for (trial, result) in results.into_iter().enumerate() {
        match result {
            Ok(n) => {
                report.passed += 1;
                report.checks += n;
            }
            Err((detail, instance)) => {
                report.failed += 1;
                report.failures.push(Failure {
                    trial,
                    detail,
                    instance,
                });
            }
        }
    }
    report
}

fn spec_json(d: &PathDescriptor) -> Value {
    serde_json::to_value(d.to_spec()).expect("descriptor specs serialize")
}

/// Greedy shrink: drop elliptic entries and simplify the other blocks while
/// `fails` keeps holding.
pub fn shrink(d: &PathDescriptor, fails: impl Fn(&PathDescriptor) -> bool) -> PathDescriptor {
    let mut current = d.clone();
    loop {
        let candidates = simpler(&current);
        match candidates.into_iter().find(|c| fails(c)) {
            Some(next) => current = next,
            None => return current,
        }
    }
}

fn simpler(d: &PathDescriptor) -> Vec<PathDescriptor> {
    let mut out = Vec::new();
    let rebuild = |loop_index, mult, hyp, elliptic: Vec<DecoratedEigenvalue>| {
        PathDescriptor::new(loop_index, mult, hyp, elliptic).ok()
    };
    for skip in 0..d.elliptic().len() {
        let rest = d
            .elliptic()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, e)| *e)
            .collect();
        out.extend(rebuild(d.loop_index(), d.mult_minus_one(), d.hyperbolic_pairs(), rest));
    }
    let elliptic = d.elliptic().to_vec();
    if d.hyperbolic_pairs() > 0 {
        out.extend(rebuild(d.loop_index(), d.mult_minus_one(), 0, elliptic.clone()));
    }
    if d.mult_minus_one() > 0 {
        out.extend(rebuild(d.loop_index(), d.mult_minus_one() - 1, d.hyperbolic_pairs(), elliptic.clone()));
    }
    if d.loop_index() != 0 {
        let toward_zero = d.loop_index() - 2 * d.loop_index().signum();
        out.extend(rebuild(toward_zero, d.mult_minus_one(), d.hyperbolic_pairs(), elliptic));
    }
    out
}

fn nz(l: u64) -> NonZeroU64 {
    NonZeroU64::new(l).expect("divisor is positive")
}

pub const ORACLE_HORIZON: u64 = 500;

pub fn oracle_family() -> DescriptorFamily {
    DescriptorFamily {
        min_den: 2,
        max_den: 100,
        max_entries: 4,
        max_multiplicity: 3,
        max_half_loop: 2,
        max_mult_minus_one: 2,
        max_hyperbolic: 2,
        min_half_dimension: 0,
        max_half_dimension: 20,
        horizon: HorizonMode::RightLimit,
        ..DescriptorFamily::default()
    }
}

/// `k (loop + mult) + sum sgn (2 floor(k theta / 2) + 1)` in plain rational
/// arithmetic.
pub fn closed_form_index(d: &PathDescriptor, k: u64) -> i64 {
    let k_rat = Rational::from_integer(k as i64);
    k as i64 * d.loop_plus_mult()
        + d.elliptic()
            .iter()
            .map(|e| e.signature() * (2 * (k_rat * e.theta() / 2).floor().to_integer() + 1))
            .sum::<i64>()
}

fn oracle_check(d: &PathDescriptor, k_max: u64) -> Check {
    let fail = |detail: String| (detail, spec_json(d));
    let mu = index_sequence(d, k_max).map_err(|e| fail(e.to_string()))?;
    let jumps = jump_sequence(d, k_max).map_err(|e| fail(e.to_string()))?;
    let mut running = cz_index(d);
    for k in 1..=k_max {
        let value = mu.get(k).expect("within horizon");
        if value != running {
            return Err(fail(format!("mu_{k} = {value} but prefix sum of jumps is {running}")));
        }
        let expected = closed_form_index(d, k);
        if value != expected {
            return Err(fail(format!("mu_{k} = {value} but closed form gives {expected}")));
        }
        running += jumps.get(k).expect("within horizon");
    }
    // the first angle as a single positive pair
    if let Some(e) = d.elliptic().first() {
        let pair = single_pair(e.theta(), 1);
        let mu = index_sequence(&pair, k_max).map_err(|e| fail(e.to_string()))?;
        for k in 1..=k_max {
            let expected = 2 * (Rational::from_integer(k as i64) * e.theta() / 2).floor().to_integer() + 1;
            if mu.get(k) != Some(expected) {
                return Err((
                    format!("single pair: mu_{k} = {:?}, expected {expected}", mu.get(k)),
                    spec_json(&pair),
                ));
            }
        }
    }
    Ok(2 * k_max)
}

pub fn single_pair(theta: Rational, signature: i64) -> PathDescriptor {
    let angle = Angle::right_limit(theta).expect("theta in (0, 1)");
    let e = DecoratedEigenvalue::new(angle, 1, signature).expect("valid pair");
    PathDescriptor::new(0, 0, 0, vec![e]).expect("valid descriptor")
}

pub fn run_oracle(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let family = oracle_family();
    let mut sampler = Sampler::new(seed);
    let instances = (0..trials)
        .map(|_| sampler.descriptor(&family))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(collect(Suite::Oracle, seed, sampler.stats().rejected, &instances, |d| {
        oracle_check(d, ORACLE_HORIZON)
    }))
}

pub const MAX_DIVISOR: u64 = 12;

pub fn theorem_family() -> DescriptorFamily {
    DescriptorFamily {
        min_den: 2,
        max_den: 24,
        max_entries: 3,
        max_multiplicity: 3,
        max_half_loop: 2,
        max_mult_minus_one: 2,
        max_hyperbolic: 1,
        min_half_dimension: 0,
        max_half_dimension: 40,
        horizon: HorizonMode::RightLimit,
        divisor_max: MAX_DIVISOR,
        ..DescriptorFamily::default()
    }
}

/// One period of the jump sequence: every `a_lambda` repeats after `2q`.
pub fn jump_period(d: &PathDescriptor) -> u64 {
    2 * d.common_denominator() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TheoremCounts {
    pub condition_b_true: u64,
    pub condition_b_false: u64,
    pub max_witness: u64,
}

/// Both directions for `l = 1..=max_l`: under (b) every jump over a full
/// period is divisible by `2l`; otherwise a witness appears by `4 l D`.
pub fn theorem_check(d: &PathDescriptor, max_l: u64) -> Result<TheoremCounts, String> {
    let mut counts = TheoremCounts::default();
    for l in 1..=max_l {
        let b = check_condition_b(d, nz(l));
        if b.holds {
            counts.condition_b_true += 1;
            let horizon = jump_period(d).max(ORACLE_HORIZON);
            let a = check_condition_a(d, nz(l), horizon).map_err(|e| e.to_string())?;
            if !a.holds() {
                return Err(format!("l = {l}: condition (b) holds but {a:?}"));
            }
        } else {
            counts.condition_b_false += 1;
            let bound = witness_search_bound(d, nz(l));
            match check_condition_a(d, nz(l), bound).map_err(|e| e.to_string())? {
                czlab_core::ConditionA::Witness { k, .. } => counts.max_witness = counts.max_witness.max(k),
                _ => return Err(format!("l = {l}: condition (b) fails but no witness up to {bound}")),
            }
        }
    }
    Ok(counts)
}

pub fn run_theorem(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let family = theorem_family();
    let mut sampler = Sampler::new(seed);
    let instances = (0..trials)
        .map(|_| sampler.descriptor(&family))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(collect(Suite::Theorem, seed, sampler.stats().rejected, &instances, |d| {
        match theorem_check(d, MAX_DIVISOR) {
            Ok(c) => Ok(c.condition_b_true + c.condition_b_false),
            Err(detail) => {
                let small = shrink(d, |c| theorem_check(c, MAX_DIVISOR).is_err());
                Err((detail, spec_json(&small)))
            }
        }
    }))
}

pub fn pool_family() -> DescriptorFamily {
    DescriptorFamily {
        min_den: 2,
        max_den: 12,
        max_entries: 3,
        max_multiplicity: 2,
        max_half_loop: 1,
        max_mult_minus_one: 1,
        max_hyperbolic: 1,
        min_half_dimension: 0,
        max_half_dimension: 8,
        horizon: HorizonMode::RightLimit,
        ..DescriptorFamily::default()
    }
}

#[derive(Debug, Clone)]
pub struct Pool {
    pub members: Vec<PathDescriptor>,
    pub target: usize,
}

/// Pool of up to `max_size` members with pairwise different decorated
/// spectra and `loop + mult_-1`.
pub fn draw_pool(sampler: &mut Sampler, max_size: usize) -> CliResult<Pool> {
    use rand::Rng;
    let family = pool_family();
    let size = sampler.rng().gen_range(2..=max_size);
    let mut members: Vec<PathDescriptor> = Vec::with_capacity(size);
    let mut attempts = 0;
    while members.len() < size && attempts < 100 * size {
        attempts += 1;
        let d = sampler.descriptor(&family)?;
        if members.iter().all(|m| m.decorated_spectrum() != d.decorated_spectrum()) {
            members.push(d);
        }
    }
    let target = sampler.rng().gen_range(0..members.len());
    Ok(Pool { members, target })
}

fn pair_bound(a: &PathDescriptor, b: &PathDescriptor) -> u64 {
    let all: Vec<Rational> = a.elliptic().iter().chain(b.elliptic()).map(|e| e.theta()).collect();
    4 * common_denominator(&all) as u64
}

pub fn pool_check(pool: &Pool) -> Check {
    let fail = |detail: String| {
        let members: Vec<Value> = pool.members.iter().map(spec_json).collect();
        (detail, json!({ "target": pool.target, "pool": members }))
    };
    let target = &pool.members[pool.target];
    let horizon = pool
        .members
        .iter()
        .map(|m| pair_bound(target, m))
        .max()
        .unwrap_or(4);
    let jumps = jump_sequence(target, horizon).map_err(|e| fail(e.to_string()))?;
    match reconstruct_from_jumps(&jumps, &pool.members).map_err(|e| fail(e.to_string()))? {
        Reconstruction::Unique { index, .. } if index == pool.target => {}
        other => return Err(fail(format!("expected member {}, got {other:?}", pool.target))),
    }
    let mut checks = 1;
    for (i, a) in pool.members.iter().enumerate() {
        for b in &pool.members[i + 1..] {
            let bound = pair_bound(a, b);
            if first_jump_difference(a, b, bound).map_err(|e| fail(e.to_string()))?.is_none() {
                return Err(fail(format!("two members agree on jumps up to {bound}")));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

pub fn run_reconstruct(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let mut sampler = Sampler::new(seed);
    let pools = (0..trials)
        .map(|_| draw_pool(&mut sampler, 10))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(collect(Suite::Reconstruct, seed, sampler.stats().rejected, &pools, pool_check))
}

pub const ARC_HORIZON: u64 = 500;

pub fn arc_family() -> DescriptorFamily {
    DescriptorFamily {
        min_den: 251,
        max_den: 1000,
        max_entries: 4,
        max_multiplicity: 3,
        min_half_dimension: 1,
        max_half_dimension: 12,
        horizon: HorizonMode::Certified(ARC_HORIZON + 1),
        elliptic_only: true,
        ..DescriptorFamily::default()
    }
}

pub fn mu_intersect_check(d: &PathDescriptor, k_max: u64) -> Check {
    let fail = |detail: String| (detail, spec_json(d));
    let jumps = jump_sequence(d, k_max).map_err(|e| fail(e.to_string()))?;
    for k in 1..=k_max {
        let crossing = arc_intersection(d, k).map_err(|e| fail(e.to_string()))?;
        let jump = jumps.get(k).expect("within horizon");
        if 2 * crossing != jump {
            return Err(fail(format!("k = {k}: 2 * {crossing} != jump {jump}")));
        }
    }
    Ok(k_max)
}

pub fn run_mu_intersect(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let family = arc_family();
    let mut sampler = Sampler::new(seed);
    let instances = (0..trials)
        .map(|_| sampler.descriptor(&family))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(collect(Suite::MuIntersect, seed, sampler.stats().rejected, &instances, |d| {
        mu_intersect_check(d, ARC_HORIZON)
    }))
}

pub const ITERATED_ARC_HORIZON: u64 = 200;

pub fn intersect_family() -> DescriptorFamily {
    DescriptorFamily {
        min_den: 101,
        max_den: 400,
        max_entries: 3,
        max_multiplicity: 3,
        min_half_dimension: 1,
        max_half_dimension: 40,
        horizon: HorizonMode::Certified(ITERATED_ARC_HORIZON + 1),
        divisor_max: 6,
        elliptic_only: true,
        ..DescriptorFamily::default()
    }
}

/// Largest `l` for which condition (b) holds: the gcd of the signatures,
/// the loop part being zero.
pub fn largest_divisor(d: &PathDescriptor) -> u64 {
    let g = d
        .elliptic()
        .iter()
        .fold(d.loop_plus_mult() / 2, |g, e| g.gcd(&e.signature()));
    g.unsigned_abs().max(1)
}

pub fn intersect_check(d: &PathDescriptor, k_max: u64) -> Check {
    let fail = |detail: String| (detail, spec_json(d));
    let l = largest_divisor(d);
    let report = verify_intersect_divisibility(d, nz(l), k_max).map_err(|e| fail(e.to_string()))?;
    match report.first_violation {
        None => Ok(report.details.arcs_checked),
        Some(v) => Err(fail(format!("l = {l}: {v:?}"))),
    }
}

pub fn run_intersect(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let family = intersect_family();
    let mut sampler = Sampler::new(seed);
    let instances = (0..trials)
        .map(|_| sampler.descriptor(&family))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(collect(Suite::Intersect, seed, sampler.stats().rejected, &instances, |d| {
        intersect_check(d, ITERATED_ARC_HORIZON)
    }))
}

pub fn rotation_family() -> RotationFamily {
    RotationFamily {
        min_n: 1,
        max_n: 5,
        min_den: 2,
        max_den: 60,
        horizon: 1,
    }
}

pub fn rotation_check(r: &Rotation) -> Check {
    let fail = |detail: String| (detail, serde_json::to_value(r.to_spec()).expect("serializes"));
    let table = recapped_fixed_points(r).map_err(|e| fail(e.to_string()))?;
    let sum: Rational = table.delta().iter().sum();
    if sum != Rational::from_integer(0) {
        return Err(fail(format!("recapped mean indices sum to {sum}")));
    }
    let matched = matching_rotation(&table, r.horizon()).map_err(|e| fail(e.to_string()))?;
    if matched.angles() != r.angles() {
        let angles: Vec<String> = matched.angles().iter().map(ToString::to_string).collect();
        return Err(fail(format!("matching rotation has angles {angles:?}")));
    }
    Ok(2)
}

pub fn run_rotation(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let family = rotation_family();
    let mut sampler = Sampler::new(seed);
    let instances = (0..trials)
        .map(|_| sampler.rotation(&family))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(collect(Suite::Rotation, seed, sampler.stats().rejected, &instances, rotation_check))
}

pub const BOUND_HORIZON: u64 = 500;

pub fn bound_family() -> DescriptorFamily {
    DescriptorFamily {
        min_den: 251,
        max_den: 1000,
        max_entries: 4,
        max_multiplicity: 3,
        max_half_loop: 3,
        max_mult_minus_one: 3,
        max_hyperbolic: 2,
        min_half_dimension: 1,
        max_half_dimension: 20,
        horizon: HorizonMode::Certified(BOUND_HORIZON),
        weakly_non_degenerate: true,
        ..DescriptorFamily::default()
    }
}

pub fn bound_check(d: &PathDescriptor, k_max: u64) -> Check {
    let fail = |detail: String| (detail, spec_json(d));
    let n = Rational::from_integer(d.half_dimension() as i64);
    let hmu = mean_index(d);
    let mu = index_sequence(d, k_max).map_err(|e| fail(e.to_string()))?;
    for k in 1..=k_max {
        let gap = Rational::from_integer(mu.get(k).expect("within horizon")) - hmu * k as i64;
        if gap >= n || gap <= -n {
            return Err(fail(format!("k = {k}: |mu_k - k hmu| = |{gap}| is not below {n}")));
        }
    }
    Ok(k_max)
}

pub fn run_bound(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let family = bound_family();
    let mut sampler = Sampler::new(seed);
    let instances = (0..trials)
        .map(|_| sampler.descriptor(&family))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(collect(Suite::Bound, seed, sampler.stats().rejected, &instances, |d| {
        bound_check(d, BOUND_HORIZON)
    }))
}

pub const S2_HORIZON: u64 = 500;

pub fn pair_family() -> DescriptorFamily {
    DescriptorFamily {
        min_den: 2,
        max_den: 100,
        max_half_loop: 2,
        horizon: HorizonMode::RightLimit,
        ..DescriptorFamily::default()
    }
}

#[derive(Debug, Clone)]
pub struct S2Pair {
    pub d0: PathDescriptor,
    pub d1: PathDescriptor,
    pub inverse: bool,
}

pub fn s2_check(pair: &S2Pair) -> Check {
    let fail = |detail: String| {
        (
            detail,
            json!({ "d0": spec_json(&pair.d0), "d1": spec_json(&pair.d1), "inverse": pair.inverse }),
        )
    };
    if pair.inverse {
        let report = s2_antisymmetry_check(&pair.d0, &pair.d1, S2_HORIZON).map_err(|e| fail(e.to_string()))?;
        if !(report.passed && report.mean_antisymmetric && report.mutual_inverse) {
            return Err(fail(format!("inverse pair: {report:?}")));
        }
        Ok(S2_HORIZON)
    } else {
        let bound = pair_bound(&pair.d0, &pair.d1);
        let report = s2_antisymmetry_check(&pair.d0, &pair.d1, bound).map_err(|e| fail(e.to_string()))?;
        match report.first_violation {
            Some(k) => Ok(k),
            None => Err(fail(format!("no violation up to {bound}"))),
        }
    }
}

/// `trials` inverse pairs followed by `trials` pairs with distinct angles.
pub fn draw_s2_pairs(sampler: &mut Sampler, trials: usize) -> CliResult<Vec<S2Pair>> {
    let family = pair_family();
    let mut pairs = Vec::with_capacity(2 * trials);
    for _ in 0..trials {
        let d0 = sampler.elliptic_pair(&family)?;
        pairs.push(S2Pair {
            d1: inverse(&d0),
            d0,
            inverse: true,
        });
    }
    for _ in 0..trials {
        let d0 = sampler.elliptic_pair(&family)?;
        let mut d1 = sampler.elliptic_pair(&family)?;
        let mut attempts = 0;
        while d1.elliptic()[0].theta() == d0.elliptic()[0].theta() && attempts < 100 {
            d1 = sampler.elliptic_pair(&family)?;
            attempts += 1;
        }
        pairs.push(S2Pair {
            d0,
            d1,
            inverse: false,
        });
    }
    Ok(pairs)
}

pub fn run_s2(seed: u64, trials: usize) -> CliResult<SuiteReport> {
    let mut sampler = Sampler::new(seed);
    let pairs = draw_s2_pairs(&mut sampler, trials)?;
    Ok(collect(Suite::S2, seed, sampler.stats().rejected, &pairs, s2_check))
}

pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> CliResult<SuiteReport> {
    match suite {
        Suite::Oracle => run_oracle(seed, trials),
        Suite::Theorem => run_theorem(seed, trials),
        Suite::Reconstruct => run_reconstruct(seed, trials),
        Suite::MuIntersect => run_mu_intersect(seed, trials),
        Suite::Intersect => run_intersect(seed, trials),
        Suite::Rotation => run_rotation(seed, trials),
        Suite::Bound => run_bound(seed, trials),
        Suite::S2 => run_s2(seed, trials),
    }
}
