mod common;

use common::r;
use czlab_core::cpn::{marked_value, trivial_cz_indices};
use czlab_core::{
    action_spectrum, check_matching_hypotheses, floquet_multipliers, is_balanced, is_trivial_loop,
    make_rotation, matching_rotation, recapped_fixed_points, resonance_lattice,
    trivial_mean_indices, Rational, Rotation,
};
use proptest::prelude::*;

/// Raw angles `p_i / q` in `[0, 2)`, filtered to non-degenerate rotations.
fn rotation() -> impl Strategy<Value = Rotation> {
    (1usize..=5, 2i64..=30)
        .prop_flat_map(|(n, q)| (Just(n), Just(q), prop::collection::vec(0..2 * q, n + 1)))
        .prop_filter_map("degenerate", |(n, q, ps)| {
            let raw: Vec<Rational> = ps.iter().map(|&p| r(p, q)).collect();
            make_rotation(n, &raw, 1).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn recapped_mean_indices_sum_to_zero(rot in rotation()) {
        let table = recapped_fixed_points(&rot).unwrap();
        prop_assert!(is_balanced(&table));
        prop_assert_eq!(trivial_mean_indices(&rot).iter().sum::<Rational>(), Rational::from_integer(0));
    }

    #[test]
    fn matching_inverts_recapping(rot in rotation()) {
        let table = recapped_fixed_points(&rot).unwrap();
        let matched = matching_rotation(&table, rot.horizon()).unwrap();
        prop_assert_eq!(&matched, &rot.normal_form());
        if rot.is_normal() {
            prop_assert_eq!(matched, rot);
        }
    }

    #[test]
    fn normal_form_has_same_spectrum(rot in rotation()) {
        let normal = rot.normal_form();
        prop_assert!(normal.is_normal());
        prop_assert_eq!(normal.angles().iter().sum::<Rational>(), Rational::from_integer(0));
        let size = rot.n() as i64 + 1;
        let (lo, hi) = (r(-2 * size * 97 - 1, 97), r(3 * size * 97 + 1, 97));
        let (a, b) = (action_spectrum(&rot, lo, hi), action_spectrum(&normal, lo, hi));
        prop_assume!(a.is_ok());
        prop_assert_eq!(a.unwrap(), b.unwrap());
    }

    #[test]
    fn spectrum_determines_marking(x in rotation(), y in rotation()) {
        prop_assume!(x.n() == y.n());
        let size = x.n() as i64 + 1;
        // a window holding labels -(n+1)..2(n+1)
        let (lo, hi) = (r(-2 * size * 97 - 1, 97), r(3 * size * 97 + 1, 97));
        let (sx, sy) = (action_spectrum(&x, lo, hi), action_spectrum(&y, lo, hi));
        prop_assume!(sx.is_ok() && sy.is_ok());
        let (sx, sy) = (sx.unwrap(), sy.unwrap());
        let values = |s: &czlab_core::MarkedSpectrum| s.points().iter().map(|p| p.value).collect::<Vec<_>>();
        let (nx, ny) = (x.normal_form(), y.normal_form());
        prop_assert_eq!(values(&sx) == values(&sy), nx.angles() == ny.angles());
    }

    #[test]
    fn marked_spectrum_monotone_and_periodic(rot in rotation()) {
        let size = rot.n() as i64 + 1;
        let (lo, hi) = (r(-3 * 97 - 1, 97), r(3 * 97 + 1, 97));
        let spectrum = action_spectrum(&rot, lo, hi);
        prop_assume!(spectrum.is_ok());
        let spectrum = spectrum.unwrap();
        for w in spectrum.points().windows(2) {
            prop_assert_eq!(w[1].label, w[0].label + 1);
            prop_assert!(w[1].value > w[0].value);
        }
        for p in spectrum.points() {
            prop_assert_eq!(marked_value(&rot, p.label), p.value);
            prop_assert_eq!(marked_value(&rot, p.label + size), p.value + 1);
        }
        // labels 0..n sum to zero
        let zero: Rational = (0..size).map(|l| marked_value(&rot, l)).sum();
        prop_assert_eq!(zero, Rational::from_integer(0));
    }

    #[test]
    fn multipliers_sum_to_mean_index(rot in rotation()) {
        let means = trivial_mean_indices(&rot);
        for (i, mean) in means.iter().enumerate() {
            let Ok(ms) = floquet_multipliers(&rot, i) else { continue };
            let total: Rational = ms.iter().map(|m| m.log).sum();
            prop_assert_eq!(&total, mean);
            for m in &ms {
                prop_assert!(m.reduced > Rational::from_integer(-1) && m.reduced < Rational::from_integer(1));
                prop_assert!(((m.log - m.reduced) / 2).is_integer());
            }
        }
    }

    #[test]
    fn trivial_indices_have_parity_of_n(rot in rotation()) {
        for mu in trivial_cz_indices(&rot) {
            prop_assert_eq!((mu - rot.n() as i64).rem_euclid(2), 0);
        }
    }

    #[test]
    fn recapped_descriptors_match_table(rot in rotation()) {
        let table = recapped_fixed_points(&rot).unwrap();
        if let Some(ds) = table.descriptors() {
            for (i, d) in ds.iter().enumerate() {
                prop_assert_eq!(czlab_core::cz_index(d), 2 * i as i64 - rot.n() as i64);
                prop_assert_eq!(czlab_core::mean_index(d), table.delta()[i]);
            }
        }
    }

    #[test]
    fn resonances(rot in rotation(), bound in 1u32..=2) {
        prop_assume!(rot.n() <= 3);
        let table = recapped_fixed_points(&rot).unwrap();
        let found = resonance_lattice(&table, bound);
        let ones = vec![1i64; rot.n() + 1];
        prop_assert!(found.contains(&ones));
        for v in &found {
            let neg: Vec<i64> = v.iter().map(|c| -c).collect();
            prop_assert!(found.contains(&neg));
        }
    }

    #[test]
    fn hypothesis_report_shape(rot in rotation()) {
        let table = recapped_fixed_points(&rot).unwrap();
        if let Ok(report) = check_matching_hypotheses(&table, 1) {
            let n = rot.n();
            prop_assert_eq!(report.points.len(), n + 1);
            prop_assert_eq!(report.pairs.len(), n * (n + 1) / 2);
            prop_assert!(report.points.iter().all(|p| p.distinct));
            let mut all: Vec<Rational> = report.points.iter().flat_map(|p| p.multipliers.clone()).collect();
            all.sort();
            all.dedup();
            prop_assert_eq!(report.holds, all.len() == n * (n + 1));
        }
    }

    #[test]
    fn integer_shifts_are_trivial(n in 1usize..=4, shifts in prop::collection::vec(-3i64..=3, 5), num in 0i64..=4) {
        let base = r(num, n as i64 + 1);
        let raw: Vec<Rational> = shifts[..=n].iter().map(|&s| base + s).collect();
        prop_assert!(is_trivial_loop(n, &raw));
    }
}
