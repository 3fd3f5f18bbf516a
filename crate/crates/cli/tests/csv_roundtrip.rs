use morselab::io::{profile_to_csv, read_profile};
use morselab_core::{DefiningGraph, DivergenceProfile, DivergenceRow, Letter, Presentation, Rho};
use proptest::prelude::*;

fn raag() -> Presentation {
    Presentation::raag(DefiningGraph::p4())
}

fn word() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop::sample::select(raag().generators()), 0..8)
}

fn row() -> impl Strategy<Value = DivergenceRow> {
    (1u32..50, prop::option::of(0u32..10_000), any::<u64>(), any::<bool>(), word(), word()).prop_map(
        |(r, value, pairs_examined, capped, x, y)| {
            let p = raag();
            DivergenceRow {
                r,
                value,
                pairs_examined,
                capped,
                witness: value.map(|_| (p.reduce(&x), p.reduce(&y))),
            }
        },
    )
}

fn profile() -> impl Strategy<Value = DivergenceProfile> {
    (1u32..20, 1u32..8, 1u32..8, 0u32..200, prop::collection::vec(row(), 0..6)).prop_map(|(n, a, b, r_max, rows)| {
        DivergenceProfile {
            n,
            rho: Rho::new(a.min(b), a.max(b)).unwrap(),
            r_max,
            rows,
        }
    })
}

proptest! {
    #[test]
    fn profiles_survive_csv(profile in profile()) {
        let p = raag();
        let text = profile_to_csv(&p, &profile);
        prop_assert_eq!(read_profile(text.as_bytes(), &p).unwrap(), profile);
    }
}
