mod common;

use common::*;
use gr38_core::driver::{canonical_rep, content_hash, interior_point, ConeRecord};
use gr38_core::known;
use gr38_core::matroid::{Matroid, Permutation};
use gr38_core::rational::{q, Q};
use gr38_core::subdivision::{regular_subdivision, tight_span, Weight};
use gr38_core::verify::{classify, detect_csp, verify};
use proptest::prelude::*;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn lineality(n: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec((-5i64..=5).prop_map(q), n)
}

fn sparse38() -> impl Strategy<Value = Weight> {
    proptest::collection::vec((0usize..56, 1i64..=3), 1..12).prop_map(|entries| {
        let mut values = vec![0i64; 56];
        for (i, v) in entries {
            values[i] = v;
        }
        Weight::from_integers(Matroid::uniform(3, 8), &values).unwrap()
    })
}

fn lift(r: usize, n: usize) -> impl Strategy<Value = Weight> {
    let m = Matroid::uniform(r, n);
    proptest::collection::vec(0i64..=3, m.num_bases()).prop_map(move |v| Weight::from_integers(m.clone(), &v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_rep_is_constant_on_orbits(w in sparse38(), sigma in permutation(8), c in lineality(8)) {
        let rep = canonical_rep(&w);
        prop_assert_eq!(&canonical_rep(&rep), &rep);
        let moved = w.permuted(&sigma).add(&Weight::lineality(w.ambient(), &c));
        prop_assert_eq!(&canonical_rep(&moved), &rep);
        prop_assert_eq!(content_hash(&canonical_rep(&moved)), content_hash(&rep));
    }

    #[test]
    fn subdivision_invariants_hold(w in lift(3, 6)) {
        let s = regular_subdivision(&w).unwrap();
        prop_assert!(s.check_invariants().is_ok());
        for c in &s.maximal_cells {
            let sets = sets_of(6, 3, c.bases);
            prop_assert_eq!(exchange_holds(&sets), c.matroid.is_some());
        }
    }

    #[test]
    fn tree_tight_spans_have_no_two_cells(w in sparse38()) {
        let s = regular_subdivision(&w).unwrap();
        if s.is_matroidal() {
            let ts = tight_span(&s).unwrap();
            if ts.is_tree(&ts.full()) {
                prop_assert!(ts.faces.is_empty());
                prop_assert!(s.codim2.is_empty());
            }
        }
    }

    #[test]
    fn weights_round_trip_through_json(w in sparse38(), sigma in permutation(8)) {
        let w = w.permuted(&sigma);
        let text = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<Weight>(&text).unwrap(), w);
    }

    #[test]
    fn labels_are_invariant_along_the_cone(w in sparse38(), k in 1i64..=4, c in lineality(8)) {
        let s = regular_subdivision(&w).unwrap();
        prop_assume!(s.is_matroidal());
        let label = classify(&w).ok();
        prop_assert_eq!(classify(&w.scaled(&q(k))).ok(), label);
        prop_assert_eq!(classify(&w.add(&Weight::lineality(w.ambient(), &c))).ok(), label);
        let rec = ConeRecord { id: "p".into(), rays: vec![w.clone(), w.scaled(&q(k))] };
        prop_assert_eq!(classify(&interior_point(&rec).unwrap()).ok(), label);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn two_components_exactly_on_the_special_orbit(sigma in permutation(8), c in lineality(8), w in sparse38(), pick in 0usize..4) {
        let special = known::w_sp().permuted(&sigma).add(&Weight::lineality(&Matroid::uniform(3, 8), &c));
        let cert = verify(&special);
        prop_assert!(detect_csp(&special));
        prop_assert_eq!(cert.components, 2);
        let other = [known::tree_example(), known::mantis_example(), known::six_fin_example(), w][pick].permuted(&sigma);
        let cert = verify(&other);
        prop_assert!(!detect_csp(&other));
        prop_assert!(cert.components != 2);
    }

    #[test]
    fn realizable_weights_verify(seed in any::<u64>(), n in 6usize..=7) {
        let w = random_valuated(&mut rng(seed), 3, n);
        let c = verify(&w);
        prop_assert!(c.verified, "{:?}", c.failure);
        prop_assert_eq!(c.components, 1);
        prop_assert_eq!(c.dimension, Some(3 * (n as i64 - 3)));
    }
}

#[test]
fn oracle_agrees_on_small_hypersimplices() {
    let mut r = rng(11);
    for (rank, n) in [(2, 4), (2, 5), (3, 5)] {
        for _ in 0..5 {
            let w = random_lift(&mut r, rank, n, 4);
            let ours: std::collections::BTreeSet<u128> =
                regular_subdivision(&w).unwrap().maximal_cells.iter().map(|c| c.bases).collect();
            assert_eq!(ours, brute_force_cells(&w), "Δ({rank},{n})");
        }
    }
}
