use kpoint_core::combinatorics::binomial;
use kpoint_core::family::{independent_sets, Multisets, Tuples};
use kpoint_core::graph::*;
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn named_generators() {
    let p = petersen();
    assert_eq!((p.n(), p.num_edges()), (10, 15));
    assert_eq!(alpha_exact(&p), 4);
    let k52 = kneser(5, 2).unwrap();
    assert!(isomorphic(&p, &k52).unwrap());
    assert_eq!(alpha_exact(&cycle(7).unwrap()), 3);
    assert_eq!(alpha_exact(&complete(6).unwrap()), 1);
    assert_eq!(alpha_exact(&path(5).unwrap()), 3);
    assert!(cycle(2).is_err());
    assert!(gnp(4, 1.5, 0).is_err());
}

#[test]
fn spec_strings() {
    assert_eq!(from_spec("cycle:5").unwrap(), cycle(5).unwrap());
    assert_eq!(from_spec("gnp:8,0.5,42").unwrap(), gnp(8, 0.5, 42).unwrap());
    assert_eq!(from_spec("kneser:5,2").unwrap().n(), 10);
    assert!(from_spec("cycle:x").is_err());
    assert!(from_spec("kneser:5").is_err());
    assert!(from_spec("/nonexistent/graph.col").is_err());
}

#[test]
fn gnp_is_reproducible() {
    assert_eq!(gnp(9, 0.4, 7).unwrap(), gnp(9, 0.4, 7).unwrap());
    assert_eq!(gnp(6, 0.0, 3).unwrap().num_edges(), 0);
    assert_eq!(gnp(6, 1.0, 3).unwrap().num_edges(), 15);
    // First draw for seed 0 is the increment itself.
    let u = (1442695040888963407u64 >> 11) as f64 / (1u64 << 53) as f64;
    assert_eq!(gnp(2, u + 1e-12, 0).unwrap().num_edges(), 1);
    assert_eq!(gnp(2, u, 0).unwrap().num_edges(), 0);
}

#[test]
fn dimacs_errors_name_the_line() {
    let err = parse_dimacs("c hi\np edge 3 1\ne 1 4\n").unwrap_err().to_string();
    assert!(err.contains('3'), "{err}");
    assert!(parse_dimacs("e 1 2\n").is_err());
}

#[test]
fn family_sizes_on_edgeless_graphs() {
    for n in 1..=6 {
        let g = empty(n).unwrap();
        for k in 0..=n {
            let fam = independent_sets(&g, k).unwrap();
            let expect: BigUint = (0..=k).map(|j| binomial(n as u64, j as u64)).sum();
            assert_eq!(BigUint::from(fam.len()), expect);
        }
    }
    assert_eq!(Tuples::new(3, 4).unwrap().iter().count(), 81);
    assert_eq!(Multisets::new(5, 3).unwrap().iter().count(), 35);
    assert!(independent_sets(&empty(30).unwrap(), 15).is_err());
}

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=9, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, s)| gnp(n, p, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn alpha_agrees_with_brute_force(n in 1usize..=16, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = gnp(n, p, seed).unwrap();
        let a = alpha_exact(&g);
        prop_assert_eq!(a, alpha_brute_force(&g).unwrap());
        prop_assert!(g.is_independent(max_independent_set(&g)));
    }

    #[test]
    fn families_are_ordered_and_indexed(g in graph(), k in 0usize..=4) {
        let fam = independent_sets(&g, k).unwrap();
        let sets = fam.sets();
        prop_assert_eq!(sets[0], VertexSet::EMPTY);
        for (i, s) in sets.iter().enumerate() {
            prop_assert!(g.is_independent(*s) && s.len() <= k);
            prop_assert_eq!(fam.index_of(*s), Some(i));
        }
        for w in sets.windows(2) {
            prop_assert!((w[0].len(), w[0].to_vec()) < (w[1].len(), w[1].to_vec()));
        }
        let total: usize = (0..=k).map(|j| fam.count_of_size(j)).sum();
        prop_assert_eq!(total, fam.len());
        // Smaller levels are prefixes.
        if k > 0 {
            let smaller = independent_sets(&g, k - 1).unwrap();
            prop_assert_eq!(smaller.sets(), &sets[..smaller.len()]);
        }
    }

    #[test]
    fn families_stabilize_at_alpha(g in graph()) {
        let a = alpha_exact(&g);
        let at = independent_sets(&g, a).unwrap();
        let beyond = independent_sets(&g, a + 2).unwrap();
        prop_assert_eq!(at.sets(), beyond.sets());
        prop_assert_eq!(at.count_of_size(a) > 0, true);
    }

    #[test]
    fn dimacs_round_trip(g in graph()) {
        let back = parse_dimacs(&write_dimacs(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn relabeling_preserves_isomorphism_class(g in graph(), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.relabel(&perm);
        prop_assert!(isomorphic(&g, &h).unwrap());
        prop_assert_eq!(alpha_exact(&g), alpha_exact(&h));
    }
}
