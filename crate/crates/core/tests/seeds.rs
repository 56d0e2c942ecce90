use std::collections::BTreeSet;

use proptest::prelude::*;
use skein_core::disc::{enumerate_triangulations, mu_delta, DiscSkeinElement};
use skein_core::qseed::{enumerate_seeds, EnumerationLimits, QuantumSeed};
use skein_core::surface::TriangulatedSurface;
use skein_core::{Execution, TorusElement};

fn disc_seed(n: usize) -> QuantumSeed {
    TriangulatedSurface::build_disc(n)
        .unwrap()
        .to_seed()
        .unwrap()
}

fn walk(seed: &QuantumSeed, path: &[usize]) -> QuantumSeed {
    let mut s = seed.clone();
    for &k in path {
        let ex = s.ex().to_vec();
        s = s.mutate(ex[k % ex.len()]).unwrap();
    }
    s
}

fn denominator(x: &TorusElement) -> Vec<i64> {
    let mut d = vec![0; x.rank()];
    for (a, _) in x.terms() {
        for (k, slot) in d.iter_mut().enumerate() {
            *slot = (*slot).max(-a[k]);
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mutation_is_an_involution(n in 4usize..=7, path in prop::collection::vec(0usize..8, 0..4), k in 0usize..8) {
        let s = walk(&disc_seed(n), &path);
        let i = s.ex()[k % s.ex().len()];
        let back = s.mutate(i).unwrap().mutate(i).unwrap();
        prop_assert_eq!(back.frame(), s.frame());
        prop_assert_eq!(back.exchange_matrix(), s.exchange_matrix());
        prop_assert_eq!(back.lambda(), s.lambda());
    }

    #[test]
    fn frames_quasi_commute_and_are_bar_invariant(n in 4usize..=7, path in prop::collection::vec(0usize..8, 0..5)) {
        let s = walk(&disc_seed(n), &path);
        prop_assert!(s.check_quasi_commutation().is_ok());
        prop_assert_eq!(s.check_compatibility().unwrap(), vec![4; s.ex().len()]);
        for x in s.frame() {
            prop_assert!(x.is_bar_invariant());
        }
    }

    #[test]
    fn exchange_monomials_commute_alike(n in 4usize..=7, path in prop::collection::vec(0usize..8, 0..4), k in 0usize..8) {
        let s = walk(&disc_seed(n), &path);
        let i = s.ex()[k % s.ex().len()];
        let (plus, minus) = s.exchange_monomials(i).unwrap();
        for (j, x) in s.frame().iter().enumerate() {
            if j == i {
                continue;
            }
            let a = plus.quasi_commutation_exponent(x).unwrap();
            let b = minus.quasi_commutation_exponent(x).unwrap();
            prop_assert!(a.is_some());
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn commuting_mutations() {
    for n in 5..=7 {
        let s = disc_seed(n);
        let pb = s.exchange_matrix().principal();
        let ex = s.ex().to_vec();
        for (a, &i) in ex.iter().enumerate() {
            for (b, &j) in ex.iter().enumerate() {
                if a < b && pb.entry(a, b) == 0 {
                    let ij = s.mutate(i).unwrap().mutate(j).unwrap();
                    let ji = s.mutate(j).unwrap().mutate(i).unwrap();
                    assert_eq!(ij.frame(), ji.frame(), "n={n} {i},{j}");
                    assert_eq!(ij.exchange_matrix(), ji.exchange_matrix());
                }
            }
        }
    }
}

#[test]
fn pentagon_mutation_class() {
    let s = disc_seed(5);
    let all = enumerate_seeds(&s, EnumerationLimits::default(), Execution::Sequential).unwrap();
    assert_eq!(all.seeds.len(), 5);
    assert_eq!(all.cluster_variables().len(), 5);
    let par = enumerate_seeds(&s, EnumerationLimits::default(), Execution::Parallel).unwrap();
    assert_eq!(par.seeds, all.seeds);
}

#[test]
fn hexagon_has_fourteen_seeds() {
    let all = enumerate_seeds(
        &disc_seed(6),
        EnumerationLimits::default(),
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(all.seeds.len(), 14);
    assert_eq!(all.cluster_variables().len(), 9);
}

#[test]
fn denominators_match_crossing_numbers() {
    for n in 5..=6 {
        let fan = enumerate_triangulations(n)
            .into_iter()
            .find(|t| t.diagonals().iter().all(|c| c.a == 1))
            .unwrap();
        let s = disc_seed(n);
        let all = enumerate_seeds(&s, EnumerationLimits::default(), Execution::Parallel).unwrap();
        let from_seeds: BTreeSet<Vec<i64>> = all
            .cluster_variables()
            .iter()
            .map(denominator)
            .filter(|d| d.iter().any(|&k| k != 0))
            .collect();
        let from_skein: BTreeSet<Vec<i64>> = skein_core::disc::all_chords(n)
            .into_iter()
            .filter(|c| fan.index_of(*c).is_none())
            .map(|c| mu_delta(&DiscSkeinElement::chord(n, c), &fan).0)
            .collect();
        assert_eq!(from_seeds, from_skein, "n={n}");
    }
}

#[test]
fn truncated_enumeration_reports_it() {
    let annulus = TriangulatedSurface::build_annulus(1, 1)
        .unwrap()
        .to_seed()
        .unwrap();
    let limits = EnumerationLimits {
        max_seeds: 8,
        max_depth: 64,
    };
    let r = enumerate_seeds(&annulus, limits, Execution::Parallel).unwrap();
    assert!(r.truncated);
    assert!(r.seeds.len() <= 8);
}
