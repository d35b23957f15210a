mod support;

use hyperlab_core::localstats::RootedHypergraph;
use hyperlab_core::localstats::{canonicalize, canonicalize_by_refinement, CanonicalClass};
use hyperlab_core::{rng, Hypergraph};
use proptest::prelude::*;
use support::{isomorphic, perturbed, random_ball, relabelled};

#[test]
fn codes_agree_with_brute_force_isomorphism() {
    let mut r = rng::stream(0xba11);
    let mut mismatches = Vec::new();
    let mut positives = 0;
    for case in 0..10_000 {
        let a = random_ball(&mut r, 10);
        let b = if case % 2 == 0 { relabelled(&mut r, &a) } else { perturbed(&mut r, &a) };
        let b = relabelled(&mut r, &b);
        let iso = isomorphic(&a, &b);
        positives += usize::from(iso);
        if (canonicalize(&a) == canonicalize(&b)) != iso {
            mismatches.push(case);
        }
    }
    assert!(mismatches.is_empty(), "mismatches at cases {mismatches:?}");
    // both outcomes are exercised
    assert!((5_000..10_000).contains(&positives), "{positives} isomorphic pairs");
}

fn symmetric_structures() -> Vec<Hypergraph> {
    let complete = |n: usize| (0..n).flat_map(|a| ((a + 1)..n).map(move |b| vec![a, b])).collect::<Vec<_>>();
    let petersen: Vec<Vec<usize>> =
        (0..5).flat_map(|i| [vec![i, (i + 1) % 5], vec![i, i + 5], vec![5 + i, 5 + (i + 2) % 5]]).collect();
    let cube: Vec<Vec<usize>> = (0..8usize)
        .flat_map(|a| (0..3).map(move |bit| (a, a ^ (1 << bit))))
        .filter(|&(a, b)| a < b)
        .map(|(a, b)| vec![a, b])
        .collect();
    let fano: Vec<Vec<usize>> = (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
    let cycle = |n: usize| (0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>();
    vec![
        Hypergraph::new(2, 6, complete(6)).unwrap(),
        Hypergraph::new(2, 10, petersen).unwrap(),
        Hypergraph::new(2, 8, cube).unwrap(),
        Hypergraph::new(3, 7, fano).unwrap(),
        Hypergraph::new(2, 9, cycle(9)).unwrap(),
        Hypergraph::new(
            2,
            10,
            [cycle(5), cycle(5).into_iter().map(|e| e.iter().map(|v| v + 5).collect()).collect()].concat(),
        )
        .unwrap(),
    ]
}

#[test]
fn symmetric_structures_match_the_oracle() {
    let mut r = rng::stream(0x5e77);
    for h in symmetric_structures() {
        for trial in 0..40 {
            let k = if trial < 10 { 1 } else { 2 };
            let f = support::random_labelling(&mut r, &h, k);
            let a = RootedHypergraph::new(h.clone(), trial % h.vertex_count(), f).unwrap();
            let b = relabelled(&mut r, &a);
            assert_eq!(canonicalize(&a), canonicalize(&b));
            assert_eq!(canonicalize_by_refinement(&a), canonicalize_by_refinement(&b));
            let p = perturbed(&mut r, &a);
            let c = relabelled(&mut r, &p);
            assert_eq!(canonicalize(&a) == canonicalize(&c), isomorphic(&a, &c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn representative_has_the_same_code(seed in any::<u64>()) {
        let mut r = rng::stream(seed);
        let a = random_ball(&mut r, 10);
        for class in [canonicalize(&a), canonicalize_by_refinement(&a)] {
            let rep = class.decode().unwrap();
            prop_assert_eq!(rep.root, 0);
            prop_assert!(isomorphic(&rep, &a));
            prop_assert_eq!(CanonicalClass::from_bytes(class.as_bytes().to_vec()).unwrap(), class);
        }
    }

    #[test]
    fn peeled_and_unpeeled_codes_separate_the_same_pairs(seed in any::<u64>()) {
        let mut r = rng::stream(seed);
        let a = random_ball(&mut r, 9);
        let p = perturbed(&mut r, &a);
        let b = relabelled(&mut r, &p);
        prop_assert_eq!(
            canonicalize(&a) == canonicalize(&b),
            canonicalize_by_refinement(&a) == canonicalize_by_refinement(&b)
        );
        prop_assert_eq!(canonicalize(&a), canonicalize(&relabelled(&mut r, &a)));
    }

    #[test]
    fn truncated_codes_are_rejected(seed in any::<u64>(), cut in 1usize..64) {
        let mut r = rng::stream(seed);
        let bytes = canonicalize(&random_ball(&mut r, 8)).as_bytes().to_vec();
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(CanonicalClass::from_bytes(bytes[..keep].to_vec()).is_err());
    }
}
