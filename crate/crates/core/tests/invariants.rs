use chipfire::cache::{decode, encode};
use chipfire::difftable::{diff_row, is_weakly_unimodal};
use chipfire::lattice::{entry, intermediate_configuration, next_row, Row};
use chipfire::stable::{
    distance_distribution, stable_configuration, total_firings_via_moment, total_firings_via_sum,
};
use proptest::prelude::*;

fn any_row() -> impl Strategy<Value = Row> {
    (
        0usize..6,
        prop::collection::vec(1u128..1_000_000, 1..24),
        0usize..6,
    )
        .prop_map(|(y_min, values, slack)| {
            let index = y_min + values.len() - 1 + slack;
            Row::new(index, y_min, values).unwrap()
        })
}

/// Palindromic rows placed symmetrically about the diagonal.
fn symmetric_row() -> impl Strategy<Value = Row> {
    (
        0usize..6,
        prop::collection::vec(1u128..1_000_000, 1..12),
        any::<bool>(),
    )
        .prop_map(|(y_min, half, odd)| {
            let mut values = half.clone();
            let tail = if odd {
                &half[..half.len() - 1]
            } else {
                &half[..]
            };
            values.extend(tail.iter().rev());
            let index = 2 * y_min + values.len() - 1;
            Row::new(index, y_min, values).unwrap()
        })
}

proptest! {
    #[test]
    fn next_row_keeps_every_even_chip(r in any_row()) {
        let next = next_row(&r);
        prop_assert_eq!(next.sum(), r.sum() - r.odd_count() as u128);
        prop_assert_eq!(next.index(), r.index() + 1);
        prop_assert!(next.values().iter().all(|&v| v > 0));
    }

    #[test]
    fn symmetry_is_preserved(r in symmetric_row()) {
        prop_assert!(r.is_palindrome());
        let next = next_row(&r);
        prop_assert!(next.is_palindrome());
        if !next.is_empty() {
            prop_assert_eq!(2 * next.y_min() + next.len() - 1, next.index());
        }
    }

    #[test]
    fn differences_integrate_back(r in any_row()) {
        let d = diff_row(&r);
        prop_assert_eq!(d.values().iter().sum::<i128>(), 0);
        prop_assert_eq!(d.integrate(), Some(r));
    }

    #[test]
    fn rise_then_fall_is_unimodal(
        up in prop::collection::vec(0i128..5, 0..10),
        down in prop::collection::vec(0i128..5, 0..10),
    ) {
        let mut xs = Vec::new();
        let mut acc = 0i128;
        for u in up { acc += u; xs.push(acc); }
        for d in down { acc -= d; xs.push(acc); }
        prop_assert!(is_weakly_unimodal(&xs));
    }

    #[test]
    fn cache_encoding_round_trips(n in 0u32..11) {
        let rows = intermediate_configuration(n, None).unwrap().collect_rows().unwrap();
        let bytes = encode(n, &rows);
        prop_assert_eq!(&bytes, &encode(n, &rows));
        let (m, back) = decode(&bytes).unwrap();
        prop_assert_eq!(m, n);
        prop_assert_eq!(back, rows);
    }

    #[test]
    fn entry_matches_rows(n in 0u32..9, x in 0usize..30, y in 0usize..30) {
        let rows = intermediate_configuration(n, None).unwrap().collect_rows().unwrap();
        let expect = rows.get(x + y).map_or(0, |r| r.get(y));
        prop_assert_eq!(entry(n, x, y).unwrap(), expect);
    }
}

#[test]
fn distributions_are_symmetric_and_complete() {
    for n in 0..=12u32 {
        let d = distance_distribution(&stable_configuration(n).unwrap());
        assert!(d.is_symmetric(), "n = {n}");
        assert_eq!(d.total(), 1u128 << n);
        if n >= 1 {
            assert_eq!(d.get(0), 0, "n = {n}");
        }
    }
}

#[test]
fn two_routes_to_total_firings() {
    for n in 0..=12u32 {
        assert_eq!(
            total_firings_via_moment(n).unwrap(),
            total_firings_via_sum(n).unwrap(),
            "n = {n}"
        );
    }
}
