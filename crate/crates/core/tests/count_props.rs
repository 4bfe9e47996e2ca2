use std::collections::BTreeMap;

use morava_core::charcount::{irr_count, rep_count, rep_count_bruteforce, CountParams};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Sizes of the orbits of multiplication by `q` on `(Z/p^m)^n`.
fn orbit_sizes(p: u64, n: u32, q: u64, m: u32) -> BTreeMap<u64, u64> {
    let pm = p.pow(m);
    let total = pm.pow(n);
    let mut seen = vec![false; total as usize];
    let mut out = BTreeMap::new();
    for start in 0..total {
        if seen[start as usize] {
            continue;
        }
        let mut x = start;
        let mut size = 0;
        while !seen[x as usize] {
            seen[x as usize] = true;
            size += 1;
            // coordinates are base-p^m digits of the index
            let mut y = 0;
            let mut scale = 1;
            let mut r = x;
            for _ in 0..n {
                y += (r % pm) * q % pm * scale;
                r /= pm;
                scale *= pm;
            }
            x = y;
        }
        *out.entry(size).or_insert(0) += 1;
    }
    out
}

/// The irreducibles are the orbits, so orbit counts by size recover them.
#[test]
fn irreducibles_are_orbits() {
    for (p, n, q, m) in [(3u64, 1u32, 4u64, 4u32), (3, 1, 19, 4), (3, 2, 4, 3), (5, 1, 11, 3), (5, 2, 6, 2)] {
        let c = CountParams::new(p, n, q).unwrap();
        for (size, count) in orbit_sizes(p, n, q, m) {
            let k = (0..).find(|&k| p.pow(k) == size).expect("orbit size is a power of p");
            assert_eq!(irr_count(&c, k), BigUint::from(count), "p={p} n={n} q={q} k={k}");
        }
    }
}

fn v1_params() -> impl Strategy<Value = (CountParams, u64)> {
    prop_oneof![
        (prop::sample::select(vec![4u64, 7, 13, 16, 22, 25, 31]), 1u64..=4)
            .prop_map(|(q, d)| (CountParams::new(3, 1, q).unwrap(), d)),
        (prop::sample::select(vec![4u64, 7, 13]), 1u64..=2).prop_map(|(q, d)| (CountParams::new(3, 2, q).unwrap(), d)),
        (prop::sample::select(vec![6u64, 11, 21]), 1u64..=3).prop_map(|(q, d)| (CountParams::new(5, 1, q).unwrap(), d)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn formula_matches_enumeration((c, d) in v1_params()) {
        let m = c.stable_precision(d);
        prop_assert_eq!(rep_count(&c, d), BigUint::from(rep_count_bruteforce(&c, d, m).unwrap()));
    }

    /// Enumeration at any level past the stable one gives the same count.
    #[test]
    fn enumeration_is_stable((c, d) in v1_params()) {
        let m = c.stable_precision(d);
        prop_assume!(rep_count_bruteforce(&c, d, m + 1).is_ok());
        prop_assert_eq!(rep_count_bruteforce(&c, d, m).unwrap(), rep_count_bruteforce(&c, d, m + 1).unwrap());
    }
}
