//! Randomized contracts for polynomial word expressions: substitution is
//! pointwise composition by substitution, stretching reindexes evaluation,
//! and the uniform polynomial sets cover the observed block lengths.

use proptest::prelude::*;
use std::collections::BTreeSet;
use xduce_core::alphabet::{Alphabet, Word};
use xduce_core::sequences::{
    beta_blocks, eval_pwe, normalize_pwe, poly_uniform_sets, star_height, stretch_pwe,
    substitute_pwe, PolyWordExpr,
};

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn names() -> Alphabet {
    Alphabet::new(["i", "j"]).unwrap()
}

fn pwe(g: Alphabet, height: u32) -> impl Strategy<Value = PolyWordExpr> {
    let leaf_g = g.clone();
    let leaf = proptest::collection::vec(0..g.len() as u32, 0..3)
        .prop_map(move |v| PolyWordExpr::Lit(Word::from_indices(leaf_g.clone(), v)));
    leaf.prop_recursive(height, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| PolyWordExpr::cat(l, r)),
            inner.prop_map(PolyWordExpr::star),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn stretch_reindexes_evaluation(e in pwe(ab(), 2), c in 1usize..=3, d in 0usize..=3) {
        let s = stretch_pwe(&e, c, d).unwrap();
        prop_assert_eq!(star_height(&s), star_height(&e));
        for n in 0..=5 {
            prop_assert_eq!(eval_pwe(&s, n), eval_pwe(&e, c * n + d), "n={}", n);
        }
    }

    #[test]
    fn substitution_is_pointwise_cbs(
        e in pwe(names(), 2),
        ei in pwe(ab(), 1),
        ej in pwe(ab(), 1),
    ) {
        let subs = vec![("i".to_owned(), ei.clone()), ("j".to_owned(), ej.clone())];
        let sub = substitute_pwe(&normalize_pwe(&e), &subs).unwrap();
        let bound = star_height(&e) + star_height(&ei).max(star_height(&ej));
        prop_assert!(star_height(&sub) <= bound);
        for n in 0..=5 {
            // CbS semantics at n: replace each outer letter by its value at n
            let outer = eval_pwe(&e, n);
            let mut want = Word::empty(ab());
            for &c in outer.letters() {
                want = want.concat(&eval_pwe(&subs[c as usize].1, n)).unwrap();
            }
            prop_assert_eq!(eval_pwe(&sub, n), want, "n={}", n);
        }
    }

    #[test]
    fn uniform_sets_cover_observed_blocks(e in pwe(ab(), 2)) {
        for c in ["a", "b"] {
            let sets = poly_uniform_sets(&e, c).unwrap();
            for n in 0..=10 {
                let blocks = beta_blocks(&eval_pwe(&e, n), c).unwrap();
                prop_assert!(
                    sets.covers(n, &blocks),
                    "letter {} n={} blocks {:?}",
                    c, n, blocks
                );
            }
        }
    }

    #[test]
    fn beta_blocks_match_the_factor_formula(v in proptest::collection::vec(0u32..2, 0..7)) {
        // oracle: k is a block length iff some split u·aᵏ·v has u not ending
        // and v not starting with the letter
        let w = Word::from_indices(ab(), v.clone());
        let blocks = beta_blocks(&w, "a").unwrap();
        let mut want = BTreeSet::new();
        for i in 0..=v.len() {
            for j in i..=v.len() {
                if v[i..j].iter().all(|&c| c == 0)
                    && (i == 0 || v[i - 1] != 0)
                    && (j == v.len() || v[j] != 0)
                {
                    want.insert(j - i);
                }
            }
        }
        prop_assert_eq!(blocks, want);
    }
}
