use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skein_core::disc::{
    all_chords, enumerate_triangulations, expand_laurent, leading_smoothing, mu, product,
    random_word, reduce, set_crossings, simple_multisets, Chord, ChordSet, DiscSkeinElement,
    Reducer, Schedule,
};

fn element(n: usize, seed: u64, len: usize) -> DiscSkeinElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    reduce(n, &random_word(&mut rng, n, len))
}

fn word(n: usize, seed: u64, len: usize) -> Vec<Chord> {
    random_word(&mut ChaCha8Rng::seed_from_u64(seed), n, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn confluence(n in 2usize..=8, seed: u64, len in 1usize..=5, sched: u64) {
        let w = word(n, seed, len);
        let a = reduce(n, &w);
        let b = Reducer::with_schedule(n, Schedule::Random(sched)).reduce(&w);
        let c = Reducer::with_schedule(n, Schedule::Last).reduce(&w);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
    }

    #[test]
    fn associativity_and_unit(n in 2usize..=7, s in any::<[u64; 3]>()) {
        let (x, y, z) = (element(n, s[0], 2), element(n, s[1], 2), element(n, s[2], 1));
        let one = DiscSkeinElement::one(n);
        prop_assert_eq!(product(&one, &x).unwrap(), x.clone());
        prop_assert_eq!(product(&x, &one).unwrap(), x.clone());
        let l = product(&product(&x, &y).unwrap(), &z).unwrap();
        let r = product(&x, &product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn bar_antiautomorphism(n in 2usize..=8, s in any::<[u64; 2]>()) {
        let (x, y) = (element(n, s[0], 2), element(n, s[1], 2));
        prop_assert_eq!(x.bar().bar(), x.clone());
        prop_assert_eq!(product(&x, &y).unwrap().bar(), product(&y.bar(), &x.bar()).unwrap());
    }

    #[test]
    fn grading_additive_and_even(n in 2usize..=8, s in any::<[u64; 2]>()) {
        let (x, y) = (element(n, s[0], 2), element(n, s[1], 3));
        let xy = product(&x, &y).unwrap();
        let (gx, gy, gxy) = (x.grading().unwrap(), y.grading().unwrap(), xy.grading().unwrap());
        let sum: Vec<i64> = gx.iter().zip(&gy).map(|(a, b)| a + b).collect();
        prop_assert_eq!(&gxy, &sum);
        prop_assert_eq!(gxy.iter().sum::<i64>() % 2, 0);
    }

    #[test]
    fn crossing_reduction(n in 4usize..=8, s: u64, k in 0usize..64) {
        let chords = all_chords(n);
        let c = chords[k % chords.len()];
        let y = element(n, s, 3);
        let cy = DiscSkeinElement::chord(n, c);
        let before = mu(&cy, &y);
        let after = mu(&cy, &product(&cy, &y).unwrap());
        prop_assert!(after <= before.saturating_sub(1), "{} -> {}", before, after);
    }

    #[test]
    fn not_a_zero_divisor(n in 3usize..=7, s: u64, k in 0usize..64) {
        let chords = all_chords(n);
        let c = DiscSkeinElement::chord(n, chords[k % chords.len()]);
        let y = element(n, s, 2).add(&element(n, s ^ 1, 2));
        prop_assume!(!y.is_zero());
        prop_assert!(!product(&c, &y).unwrap().is_zero());
    }

    #[test]
    fn basis_elements_reduce_to_themselves(n in 3usize..=7, k in 0usize..500) {
        let sets = simple_multisets(n, 3);
        let x = &sets[k % sets.len()];
        let b = DiscSkeinElement::basis(n, x.clone());
        let normalized = reduce(n, x.chords()).scale(&skein_core::QCoeff::v_pow(-x.internal_lambda(n)));
        prop_assert_eq!(&normalized, &b);
        prop_assert_eq!(product(&b, &DiscSkeinElement::one(n)).unwrap(), b);
    }

    #[test]
    fn leading_layer_is_all_q_smoothings(n in 4usize..=7, k in 0usize..64, j in 0usize..500) {
        let chords = all_chords(n);
        let c = chords[k % chords.len()];
        let sets = simple_multisets(n, 3);
        let m = &sets[j % sets.len()];
        prop_assume!(set_crossings(&ChordSet::from_chords(vec![c]), m) > 0);
        let p = product(&DiscSkeinElement::chord(n, c), &DiscSkeinElement::basis(n, m.clone())).unwrap();
        prop_assert_eq!(p.in_q(), DiscSkeinElement::basis(n, leading_smoothing(c, m, n)));
    }
}

#[test]
fn reduce_of_basis_word_is_twisted_basis() {
    for n in 3..=6 {
        for x in simple_multisets(n, 3) {
            let expected = DiscSkeinElement::term(
                n,
                x.clone(),
                skein_core::QCoeff::v_pow(x.internal_lambda(n)),
            );
            assert_eq!(reduce(n, x.chords()), expected, "{x}");
        }
    }
}

#[test]
fn gamma_is_injective_on_small_multicurves() {
    let n = 6;
    for c in all_chords(n) {
        let mut seen: HashMap<ChordSet, ChordSet> = HashMap::new();
        for m in simple_multisets(n, 3) {
            let g = leading_smoothing(c, &m, n);
            if let Some(prev) = seen.insert(g.clone(), m.clone()) {
                panic!("γ_{c} sends {prev} and {m} to {g}");
            }
        }
    }
}

#[test]
fn expansion_is_multiplicative_for_heptagon() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in enumerate_triangulations(7).iter().step_by(6) {
        let form = Arc::new(t.lambda());
        let mut r = Reducer::new(7);
        for _ in 0..10 {
            let x = reduce(7, &random_word(&mut rng, 7, 2));
            let y = reduce(7, &random_word(&mut rng, 7, 1));
            let xy = r.product(&x, &y).unwrap();
            let lhs = expand_laurent(&xy, t, &mut r, &form).unwrap();
            let rhs = &expand_laurent(&x, t, &mut r, &form).unwrap()
                * &expand_laurent(&y, t, &mut r, &form).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
