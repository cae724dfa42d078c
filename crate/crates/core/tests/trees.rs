use std::collections::BTreeSet;

use fcell_core::builtin::{link_corpus, tree_corpus};
use fcell_core::obstruction::{bottom_meridian_word, expected_bottom_phi, Verdict};
use fcell_core::random::{random_tree, random_word, TreeShape};
use fcell_core::{
    is_homotopically_trivial, magnus_expand, obstruct_bounding, phi_of_word, FCellTree, Monomial,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tree(seed: u64) -> FCellTree {
    random_tree(&mut ChaCha8Rng::seed_from_u64(seed), &TreeShape::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_basis_lies_in_rtilde(seed in any::<u64>()) {
        let t = tree(seed);
        for v in 1..t.num_vertices() {
            let rt: BTreeSet<Monomial> = t.rtilde_basis(v).monomials.into_iter().collect();
            for m in t.q_basis(v).monomials {
                prop_assert!(rt.contains(&m), "vertex {}: {} not in rtilde", v, m.render(t.alphabet()));
            }
        }
    }

    #[test]
    fn rtilde_is_an_admissible_antichain(seed in any::<u64>()) {
        let t = tree(seed);
        let rt = t.rtilde_basis(t.root()).monomials;
        for a in &rt {
            prop_assert!(!a.has_repeats());
            prop_assert!(t.is_admissible_monomial(a));
            for b in &rt {
                prop_assert!(a == b || !b.contains_subsequence(a));
            }
        }
    }

    #[test]
    fn rc_projection_is_multiplicative(seed in any::<u64>()) {
        let t = tree(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = t.num_leaves();
        let u = random_word(t.alphabet(), 8, &mut rng);
        let v = random_word(t.alphabet(), 8, &mut rng);
        let mu = magnus_expand(&u, q).unwrap();
        let mv = magnus_expand(&v, q).unwrap();
        let lhs = t.rc_project(&mu.mul(&mv).unwrap()).unwrap();
        let rhs = t.rc_project(&mu).unwrap().mul(&t.rc_project(&mv).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_is_linear_on_powers(seed in any::<u64>(), k in -3i64..=3) {
        let t = tree(seed);
        let w = bottom_meridian_word(&t).unwrap();
        let base = phi_of_word(&t, &w).unwrap();
        prop_assert_eq!(base.clone(), expected_bottom_phi(&t));
        prop_assert_eq!(phi_of_word(&t, &w.pow(k)).unwrap(), base * BigInt::from(k));
    }
}

#[test]
fn corpus_trees_round_trip_through_uniformize() {
    for (name, t) in tree_corpus() {
        let u = t.uniformize().unwrap();
        assert_eq!(u.num_leaves(), t.num_leaves(), "{name}");
        let w = bottom_meridian_word(&u).unwrap();
        assert_eq!(phi_of_word(&u, &w).unwrap(), expected_bottom_phi(&t), "{name}");
    }
}

#[test]
fn handle_trees_reduce_to_homotopy_triviality() {
    for (name, l) in link_corpus() {
        let n = l.len();
        let c = obstruct_bounding(&l, &vec![FCellTree::single_handle(); n], n + 1).unwrap();
        let trivial = is_homotopically_trivial(&l, n + 1).unwrap();
        assert_eq!(c.verdict == Verdict::Obstructed, !trivial, "{name}");
    }
}
