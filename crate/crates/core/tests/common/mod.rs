#![allow(dead_code)]

use czlab_core::{Angle, DecoratedEigenvalue, PathDescriptor, Rational};
use proptest::prelude::*;

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

/// `(theta, multiplicity, signature)` with `theta = p/q`, `q <= max_den`.
pub fn entry(max_den: i64) -> impl Strategy<Value = (Rational, u64, i64)> {
    (2..=max_den)
        .prop_flat_map(|q| (1..q, Just(q), 1u64..=3))
        .prop_flat_map(|(p, q, m)| (Just(r(p, q)), Just(m), 0..=m))
        .prop_map(|(theta, m, j)| (theta, m, m as i64 - 2 * j as i64))
}

fn assemble(
    loop_index: i64,
    mult: u64,
    hyperbolic: u64,
    entries: Vec<(Rational, u64, i64)>,
    angle: impl Fn(Rational) -> Angle,
) -> PathDescriptor {
    let elliptic = entries
        .into_iter()
        .map(|(theta, m, s)| DecoratedEigenvalue::new(angle(theta), m, s).unwrap())
        .collect();
    PathDescriptor::new(loop_index, mult, hyperbolic, elliptic).unwrap()
}

/// Right-limit descriptors: every iterate is admissible.
pub fn descriptor(max_den: i64, max_entries: usize) -> impl Strategy<Value = PathDescriptor> {
    (
        -3i64..=3,
        0u64..=2,
        0u64..=2,
        prop::collection::vec(entry(max_den), 0..=max_entries),
    )
        .prop_map(|(half_loop, mult, hyp, entries)| {
            assemble(2 * half_loop, mult, hyp, entries, |t| Angle::right_limit(t).unwrap())
        })
}

/// Elliptic-only descriptors whose angles are certified up to the largest
/// common horizon.
pub fn certified_elliptic(max_den: i64, max_entries: usize) -> impl Strategy<Value = PathDescriptor> {
    prop::collection::vec(entry(max_den), 1..=max_entries).prop_map(|entries| {
        let horizon = entries
            .iter()
            .map(|(t, _, _)| czlab_core::angle::first_degenerate_iterate(t) - 1)
            .min()
            .unwrap();
        assemble(0, 0, 0, entries, |t| Angle::new(t, horizon).unwrap())
    })
}

/// Right-limit descriptor satisfying condition (b) for `l`.
pub fn divisible_descriptor(max_den: i64, max_entries: usize) -> impl Strategy<Value = (u64, PathDescriptor)> {
    (1u64..=6).prop_flat_map(move |l| {
        let li = l as i64;
        let entries = prop::collection::vec(
            ((2..=max_den).prop_flat_map(|q| (1..q, Just(q))), -2i64..=2, 0u64..=1),
            0..=max_entries,
        )
        .prop_map(move |raw| {
            raw.into_iter()
                .map(|((p, q), c, extra)| {
                    let s = c * li;
                    let m = match s.unsigned_abs() + 2 * extra {
                        0 => 2,
                        m => m,
                    };
                    (r(p, q), m, s)
                })
                .collect::<Vec<_>>()
        });
        (Just(l), -2i64..=2, 0u64..=2, entries).prop_map(move |(l, c, half_mult, entries)| {
            let mult = 2 * half_mult;
            let loop_index = 2 * li * c - mult as i64;
            (l, assemble(loop_index, mult, 0, entries, |t| Angle::right_limit(t).unwrap()))
        })
    })
}

/// Mixed descriptors certified up to the common horizon of their angles.
pub fn certified_descriptor(max_den: i64, max_entries: usize) -> impl Strategy<Value = PathDescriptor> {
    (
        -3i64..=3,
        0u64..=2,
        0u64..=2,
        prop::collection::vec(entry(max_den), 0..=max_entries),
    )
        .prop_map(|(half_loop, mult, hyp, entries)| {
            let horizon = entries
                .iter()
                .map(|(t, _, _)| czlab_core::angle::first_degenerate_iterate(t) - 1)
                .min()
                .unwrap_or(1);
            assemble(2 * half_loop, mult, hyp, entries, |t| Angle::new(t, horizon).unwrap())
        })
}

/// Right-limit descriptors whose denominators divide 120.
pub fn small_period_descriptor(max_entries: usize) -> impl Strategy<Value = PathDescriptor> {
    let entry = prop::sample::select(vec![2i64, 3, 4, 5, 6, 8, 10, 12])
        .prop_flat_map(|q| (1..q, Just(q), 1u64..=3))
        .prop_flat_map(|(p, q, m)| (Just(r(p, q)), Just(m), 0..=m))
        .prop_map(|(theta, m, j)| (theta, m, m as i64 - 2 * j as i64));
    (
        -3i64..=3,
        0u64..=2,
        prop::collection::vec(entry, 0..=max_entries),
    )
        .prop_map(|(half_loop, mult, entries)| {
            assemble(2 * half_loop, mult, 0, entries, |t| Angle::right_limit(t).unwrap())
        })
}
