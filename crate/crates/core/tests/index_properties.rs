mod common;

use std::num::NonZeroU64;

use common::{
    certified_descriptor, certified_elliptic, descriptor, divisible_descriptor, entry, r,
    small_period_descriptor,
};
use czlab_core::index::{first_jump_difference, witness_search_bound};
use czlab_core::rational::floor_half_multiple;
use czlab_core::{
    check_condition_a, check_condition_b, cz_index, direct_sum, index_sequence, inverse, jump_a,
    jump_sequence, mean_index, reconstruct_from_jumps, Angle, PathDescriptor, Rational,
    Reconstruction,
};
use num_traits::Signed;
use proptest::prelude::*;

const K: u64 = 80;

fn nz(l: u64) -> NonZeroU64 {
    NonZeroU64::new(l).unwrap()
}

/// `mu_k` summed term by term: `k (loop + mult) + sum sgn (2 floor(k theta / 2) + 1)`.
fn closed_form(d: &PathDescriptor, k: u64) -> i64 {
    k as i64 * d.loop_plus_mult()
        + d.elliptic()
            .iter()
            .map(|e| e.signature() * (2 * floor_half_multiple(&e.theta(), k) + 1))
            .sum::<i64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sequence_matches_closed_form(d in descriptor(60, 4)) {
        let mu = index_sequence(&d, K).unwrap();
        for k in 1..=K {
            prop_assert_eq!(mu.get(k).unwrap(), closed_form(&d, k));
        }
    }

    #[test]
    fn prefix_sums_of_jumps(d in descriptor(60, 4)) {
        let mu = index_sequence(&d, K).unwrap();
        let jumps = jump_sequence(&d, K).unwrap();
        let mut running = cz_index(&d);
        for k in 1..=K {
            prop_assert_eq!(mu.get(k).unwrap(), running);
            running += jumps.get(k).unwrap();
        }
    }

    #[test]
    fn additivity(d1 in descriptor(40, 3), d2 in descriptor(40, 3)) {
        let sum = direct_sum(&d1, &d2).unwrap();
        let (a, b, c) = (
            index_sequence(&d1, K).unwrap(),
            index_sequence(&d2, K).unwrap(),
            index_sequence(&sum, K).unwrap(),
        );
        for k in 1..=K {
            prop_assert_eq!(c.get(k).unwrap(), a.get(k).unwrap() + b.get(k).unwrap());
        }
    }

    #[test]
    fn first_jump_is_loop_plus_mult(d in descriptor(60, 4)) {
        prop_assert_eq!(jump_sequence(&d, 1).unwrap().get(1).unwrap(), d.loop_plus_mult());
    }

    #[test]
    fn mean_index_bound(d in certified_descriptor(60, 4)) {
        let n = Rational::from_integer(d.half_dimension() as i64);
        let hmu = mean_index(&d);
        let k_max = d.horizon().finite().unwrap_or(K);
        let mu = index_sequence(&d, k_max).unwrap();
        for k in 1..=k_max {
            let gap = (Rational::from_integer(mu.get(k).unwrap()) - hmu * k as i64).abs();
            if d.is_weakly_non_degenerate() {
                prop_assert!(gap < n, "k = {}: gap {} not below {}", k, gap, n);
            } else {
                prop_assert!(gap <= n);
            }
        }
    }

    #[test]
    fn mean_index_bound_right_limit(d in descriptor(60, 4)) {
        // equality only where the rational value itself is degenerate
        let n = Rational::from_integer(d.half_dimension() as i64);
        let hmu = mean_index(&d);
        let mu = index_sequence(&d, K).unwrap();
        for k in 1..=K {
            let gap = (Rational::from_integer(mu.get(k).unwrap()) - hmu * k as i64).abs();
            let degenerate = d
                .elliptic()
                .iter()
                .any(|e| (e.theta() * k as i64 / 2).is_integer());
            prop_assert!(gap <= n);
            if d.is_weakly_non_degenerate() && !degenerate {
                prop_assert!(gap < n);
            }
        }
    }

    #[test]
    fn jump_count_telescopes((theta, _, _) in entry(100), offset in 0u64..50) {
        let horizon = czlab_core::angle::first_degenerate_iterate(&theta) - 1;
        let certified = Angle::new(theta, horizon).unwrap();
        let limit = Angle::right_limit(theta).unwrap();
        let k_max = horizon.saturating_sub(1);
        let mut total = 0i64;
        for k in 1..=k_max {
            total += i64::from(jump_a(&certified, k).unwrap());
            prop_assert_eq!(total, floor_half_multiple(&theta, k + 1));
        }
        let far = k_max + 1 + offset * 7;
        let total: i64 = (1..=far).map(|k| i64::from(jump_a(&limit, k).unwrap())).sum();
        prop_assert_eq!(total, floor_half_multiple(&theta, far + 1));
    }

    #[test]
    fn condition_b_implies_a((l, d) in divisible_descriptor(60, 4)) {
        prop_assert!(check_condition_b(&d, nz(l)).holds);
        let found = check_condition_a(&d, nz(l), 400).unwrap();
        prop_assert!(found.holds(), "{:?}", found);
    }

    #[test]
    fn witness_when_b_fails(d in small_period_descriptor(3), l in 1u64..=12) {
        prop_assume!(!check_condition_b(&d, nz(l)).holds);
        let bound = witness_search_bound(&d, nz(l));
        let found = check_condition_a(&d, nz(l), bound).unwrap();
        prop_assert!(!found.holds(), "no witness up to {}", bound);
    }

    #[test]
    fn cancellation(d in descriptor(60, 4)) {
        let both = direct_sum(&d, &inverse(&d)).unwrap();
        prop_assert!(jump_sequence(&both, K).unwrap().values().iter().all(|&j| j == 0));
        prop_assert_eq!(inverse(&inverse(&d)), d);
    }

    #[test]
    fn reconstruction_soundness(pool in prop::collection::vec(small_period_descriptor(3), 1..6), pick in any::<prop::sample::Index>()) {
        let mut distinct: Vec<PathDescriptor> = Vec::new();
        for d in pool {
            if distinct.iter().all(|x| x.decorated_spectrum() != d.decorated_spectrum()) {
                distinct.push(d);
            }
        }
        let target = pick.index(distinct.len());
        let all: Vec<Rational> = distinct.iter().flat_map(|d| d.elliptic().iter().map(|e| e.theta())).collect();
        let k_max = 4 * czlab_core::rational::common_denominator(&all) as u64;
        let jumps = jump_sequence(&distinct[target], k_max).unwrap();
        match reconstruct_from_jumps(&jumps, &distinct).unwrap() {
            Reconstruction::Unique { index, .. } => prop_assert_eq!(index, target),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn distinct_spectra_separate(a in small_period_descriptor(3), b in small_period_descriptor(3)) {
        prop_assume!(a.decorated_spectrum() != b.decorated_spectrum());
        let all: Vec<Rational> = a.elliptic().iter().chain(b.elliptic()).map(|e| e.theta()).collect();
        let k_max = 4 * czlab_core::rational::common_denominator(&all) as u64;
        prop_assert!(first_jump_difference(&a, &b, k_max).unwrap().is_some());
    }

    #[test]
    fn certified_sequences_agree_with_right_limit(d in certified_elliptic(50, 3)) {
        let k_max = d.horizon().finite().unwrap();
        let spec = d.to_spec();
        let limit = czlab_core::validate_right_limit(&spec).unwrap();
        let certified = index_sequence(&d, k_max).unwrap();
        let limit = index_sequence(&limit, k_max).unwrap();
        prop_assert_eq!(certified.values(), limit.values());
    }
}

#[test]
fn single_positive_pair_oracle() {
    for q in 2..=60 {
        for p in 1..q {
            let theta = r(p, q);
            let d = PathDescriptor::new(
                0,
                0,
                0,
                vec![czlab_core::DecoratedEigenvalue::new(Angle::right_limit(theta).unwrap(), 1, 1).unwrap()],
            )
            .unwrap();
            let mu = index_sequence(&d, 200).unwrap();
            for k in 1..=200u64 {
                let expected = 2 * (Rational::from_integer(k as i64) * theta / 2).floor().to_integer() + 1;
                assert_eq!(mu.get(k).unwrap(), expected, "theta = {theta}, k = {k}");
            }
        }
    }
}
