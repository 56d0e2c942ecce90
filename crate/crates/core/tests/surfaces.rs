use proptest::prelude::*;
use skein_core::surface::TriangulatedSurface;

fn arc_counts_hold(s: &TriangulatedSurface) -> bool {
    s.components().iter().all(|c| {
        6 * c.genus + 3 * c.boundaries as i64 + 2 * c.points.len() as i64 - 6 == c.arcs.len() as i64
    })
}

fn surfaces() -> Vec<TriangulatedSurface> {
    let mut v: Vec<_> = (3..=8)
        .map(|n| TriangulatedSurface::build_disc(n).unwrap())
        .collect();
    for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
        v.push(TriangulatedSurface::build_annulus(p, q).unwrap());
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Random flip sequences: the seed of the flipped surface is the mutated
    /// seed, at the level of `B` and `Λ`.
    #[test]
    fn flip_mutation_square(k in 0usize..10, path in prop::collection::vec(0usize..16, 1..6)) {
        let all = surfaces();
        let mut s = all[k % all.len()].clone();
        prop_assume!(!s.exchangeable().is_empty());
        let mut seed = s.to_seed().unwrap();
        for step in path {
            let ex = s.exchangeable();
            let j = ex[step % ex.len()];
            s = s.flip(j).unwrap();
            prop_assert!(arc_counts_hold(&s));
            let t = seed.mutate(j).unwrap();
            prop_assert_eq!(t.exchange_matrix(), &s.b_matrix());
            prop_assert_eq!(&**t.lambda(), &s.lambda_matrix());
            prop_assert!(s.to_seed().unwrap().check_compatibility().is_ok());
            // keep the torus small: restart from the flipped surface
            seed = s.to_seed().unwrap();
        }
    }

    #[test]
    fn flipping_twice_restores(k in 0usize..10, step in 0usize..16) {
        let all = surfaces();
        let s = &all[k % all.len()];
        let ex = s.exchangeable();
        prop_assume!(!ex.is_empty());
        let j = ex[step % ex.len()];
        let back = s.flip(j).unwrap().flip(j).unwrap();
        prop_assert_eq!(back.b_matrix(), s.b_matrix());
        prop_assert_eq!(back.lambda_matrix(), s.lambda_matrix());
    }
}

#[test]
fn cutting_every_arc() {
    for s in surfaces() {
        for j in s.exchangeable() {
            let c = s.cut(j).unwrap();
            assert!(arc_counts_hold(&c));
            assert_eq!(c.num_arcs(), s.num_arcs() + 1);
            assert!(c.to_seed().unwrap().check_compatibility().is_ok());
            let before = s.q_matrix();
            let after = c.q_matrix();
            for &a in &c.exchangeable() {
                for &b in &c.exchangeable() {
                    assert_eq!(after.entry(a, b), before.entry(a, b), "{s} cut at {j}");
                }
            }
        }
    }
}

#[test]
fn annulus_cut_is_a_square() {
    let c = TriangulatedSurface::build_annulus(1, 1)
        .unwrap()
        .cut(0)
        .unwrap();
    assert_eq!(c.components().len(), 1);
    assert_eq!(c.components()[0].points.len(), 4);
    assert_eq!(c.components()[0].genus, 0);
    assert!(c.b_matrix().principal().is_zero());
}

#[test]
fn small_discs_are_isolated() {
    let d3 = TriangulatedSurface::build_disc(3).unwrap();
    let d4 = TriangulatedSurface::build_disc(4).unwrap();
    let u = d4.disjoint_union(&d3).unwrap().disjoint_union(&d4).unwrap();
    assert_eq!(u.components().len(), 3);
    assert!(u.b_matrix().principal().is_zero());
    assert!(!TriangulatedSurface::build_disc(5)
        .unwrap()
        .b_matrix()
        .principal()
        .is_zero());
}
