use fcell_core::builtin::link_corpus;
use fcell_core::milnor::{mu_bar, sub_indices};
use fcell_core::random::pattern_library;
use fcell_core::{
    magnus_expand, reduced_magnus, Alphabet, Homomorphism, LinkPresentation, Letter, Monomial, Word,
};
use itertools::Itertools;
use num_traits::Zero;
use proptest::prelude::*;

fn word_in(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..k, any::<bool>()), 0..=max_len).prop_map(move |ls| {
        let a = Alphabet::numbered("m", k);
        Word::reduce(&a, ls.into_iter().map(|(g, inv)| Letter::new(g, if inv { -1 } else { 1 })))
            .unwrap()
    })
}

fn same_alphabet(k: usize, len: usize, count: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(prop::collection::vec((0..k, any::<bool>()), 0..=len), count).prop_map(
        move |words| {
            let a = Alphabet::numbered("m", k);
            words
                .into_iter()
                .map(|ls| {
                    Word::reduce(&a, ls.into_iter().map(|(g, inv)| Letter::new(g, if inv { -1 } else { 1 })))
                        .unwrap()
                })
                .collect()
        },
    )
}

/// Lowest nonvanishing homogeneous part of `M(w) - 1`.
fn leading_part(w: &Word, q: usize) -> Vec<(Monomial, num_bigint::BigInt)> {
    let s = magnus_expand(w, q).unwrap();
    (1..=q).map(|d| s.degree_part(d)).find(|p| !p.is_empty()).unwrap_or_default()
}

proptest! {
    #[test]
    fn group_laws(ws in same_alphabet(3, 8, 3)) {
        let (u, v, w) = (&ws[0], &ws[1], &ws[2]);
        prop_assert_eq!(u.multiply(v).unwrap().multiply(w).unwrap(), u.multiply(&v.multiply(w).unwrap()).unwrap());
        prop_assert!(u.multiply(&u.inverse()).unwrap().is_identity());
        prop_assert_eq!(u.commutator(v).unwrap().inverse(), v.commutator(u).unwrap());
        prop_assert_eq!(Word::parse(u.alphabet(), &u.to_string()).unwrap(), u.clone());
    }

    #[test]
    fn substitution_is_a_homomorphism(ws in same_alphabet(3, 6, 5)) {
        let a = ws[0].alphabet().clone();
        let mut h = Homomorphism::new(&a, &a);
        for g in 0..3 {
            h.set_index(g, ws[g + 2].clone()).unwrap();
        }
        let uv = ws[0].multiply(&ws[1]).unwrap();
        prop_assert_eq!(h.apply(&uv).unwrap(), h.apply(&ws[0]).unwrap().multiply(&h.apply(&ws[1]).unwrap()).unwrap());
    }

    #[test]
    fn magnus_is_multiplicative(ws in same_alphabet(3, 10, 2), q in 1usize..=5) {
        let (u, v) = (&ws[0], &ws[1]);
        let lhs = magnus_expand(&u.multiply(v).unwrap(), q).unwrap();
        let rhs = magnus_expand(u, q).unwrap().mul(&magnus_expand(v, q).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn magnus_separates_short_words(ws in same_alphabet(2, 4, 2)) {
        let (u, v) = (&ws[0], &ws[1]);
        let d = u.inverse().multiply(v).unwrap().len().max(1);
        prop_assert_eq!(magnus_expand(u, d).unwrap() == magnus_expand(v, d).unwrap(), u == v);
    }

    #[test]
    fn degree_one_is_abelianization(w in word_in(4, 12)) {
        let s = magnus_expand(&w, 2).unwrap();
        let ab = w.abelianization();
        for (g, e) in ab.iter().enumerate() {
            prop_assert_eq!(s.coefficient(&Monomial::var(g)), (*e).into());
        }
    }

    #[test]
    fn leading_part_is_conjugation_invariant(ws in same_alphabet(3, 8, 2)) {
        let (w, h) = (&ws[0], &ws[1]);
        prop_assert_eq!(leading_part(w, 5), leading_part(&w.conjugate(h).unwrap(), 5));
    }

    #[test]
    fn reduced_magnus_kills_milnor_relators(ws in same_alphabet(3, 6, 1), g in 0usize..3) {
        let a = ws[0].alphabet().clone();
        let m = Word::generator(&a, g);
        let r = m.commutator(&m.conjugate(&ws[0]).unwrap()).unwrap();
        prop_assert!(reduced_magnus(&r, 4).unwrap().is_one());
    }

    #[test]
    fn mu_bar_ignores_longitude_conjugation(seed_words in same_alphabet(4, 5, 4)) {
        for (name, l) in link_corpus() {
            let n = l.len();
            let alphabet = l.meridians().clone();
            let conjugated: Vec<Word> = l
                .longitudes()
                .iter()
                .zip(&seed_words)
                .map(|(w, h)| {
                    let h = Word::reduce(&alphabet, h.letters().iter().filter(|x| x.generator < n).copied()).unwrap();
                    w.conjugate(&h).unwrap()
                })
                .collect();
            let moved = LinkPresentation::new(alphabet, conjugated).unwrap();
            for k in 2..=n {
                for full in (0..n).permutations(k) {
                    let (j, init) = full.split_last().unwrap();
                    prop_assert_eq!(
                        mu_bar(&l, init, *j, n + 1).unwrap(),
                        mu_bar(&moved, init, *j, n + 1).unwrap(),
                        "{} at {:?}", name, full
                    );
                }
            }
        }
    }
}

#[test]
fn sub_indices_delete_and_rotate() {
    let subs = sub_indices(&[0, 1, 2]);
    for s in [vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1], vec![0, 2], vec![2, 0]] {
        assert!(subs.contains(&s), "{s:?} missing from {subs:?}");
    }
    assert!(subs.iter().all(|s| s.len() == 2));
}

#[test]
fn wedge_words_have_no_proper_subset_terms() {
    for t in pattern_library() {
        let n = t.len();
        let a = t.wedge_word().alphabet().clone();
        let mut kill_y = Homomorphism::identity(&a);
        kill_y.set("y", Word::identity(&a)).unwrap();
        let w = kill_y.apply(t.wedge_word()).unwrap();
        let s = reduced_magnus(&w, n).unwrap();
        for (m, c) in s.terms() {
            if m.is_one() {
                continue;
            }
            assert_eq!(m.degree(), n, "pattern with {n} components has term {c} * {}", m.render(&a));
        }
        assert!(!s.coefficient(&Monomial::new(t.preferred_order().iter().copied())).is_zero());
    }
}
