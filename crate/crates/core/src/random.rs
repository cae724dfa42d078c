//! Seeded generators for words and valid flexible-cell trees.

use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::solid_torus::SolidTorusLink;
use crate::tree::{FCellTree, TreeSpec};
use crate::word::{Alphabet, Letter, Word};

/// A uniformly random reduced word of length at most `max_len`.
pub fn random_word<R: Rng + ?Sized>(alphabet: &Alphabet, max_len: usize, rng: &mut R) -> Word {
    let len = rng.gen_range(0..=max_len);
    random_word_of_len(alphabet, len, rng)
}

/// A reduced word of exactly `len` letters (shorter only for an empty alphabet).
pub fn random_word_of_len<R: Rng + ?Sized>(alphabet: &Alphabet, len: usize, rng: &mut R) -> Word {
    if alphabet.is_empty() {
        return Word::identity(alphabet);
    }
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(0..alphabet.len()), if rng.gen() { 1 } else { -1 });
        if letters.last() == Some(&l.inv()) {
            continue;
        }
        letters.push(l);
    }
    Word::reduce(alphabet, letters).expect("letters are in range")
}

/// Patterns used for random trees: the core, Bing doubles with clasp powers
/// 1, 2, 3 and -1, a partial double with three components and the depth-two
/// iterated double.
pub fn pattern_library() -> &'static [Arc<SolidTorusLink>] {
    static LIB: OnceLock<Vec<Arc<SolidTorusLink>>> = OnceLock::new();
    LIB.get_or_init(|| {
        let core = SolidTorusLink::core();
        let bing = core.bing_double().expect("bing");
        vec![
            Arc::new(core.clone()),
            Arc::new(bing.clone()),
            Arc::new(core.bing_double_power(2).expect("power 2")),
            Arc::new(core.bing_double_power(3).expect("power 3")),
            Arc::new(core.bing_double_power(-1).expect("power -1")),
            Arc::new(bing.double_component(1, 1).expect("partial double")),
            Arc::new(bing.bing_double().expect("depth two")),
        ]
    })
}

/// Shape limits for [`random_tree`].
#[derive(Clone, Copy, Debug)]
pub struct TreeShape {
    pub max_leaves: usize,
    pub max_height: usize,
    pub max_surface_children: usize,
}

impl Default for TreeShape {
    fn default() -> Self {
        TreeShape {
            max_leaves: 8,
            max_height: 2,
            max_surface_children: 3,
        }
    }
}

fn gen_surface<R: Rng + ?Sized>(rng: &mut R, height_left: usize, shape: &TreeShape) -> TreeSpec {
    let count = rng.gen_range(1..=shape.max_surface_children);
    let lib = pattern_library();
    let children = (0..count)
        .map(|_| {
            if height_left > 0 && rng.gen_bool(0.75) {
                let link = lib[rng.gen_range(0..lib.len())].clone();
                let kids = (0..link.len())
                    .map(|_| {
                        if height_left > 1 && rng.gen_bool(0.4) {
                            gen_surface(rng, height_left - 1, shape)
                        } else {
                            TreeSpec::handle()
                        }
                    })
                    .collect();
                TreeSpec::Link(link, kids)
            } else {
                TreeSpec::handle()
            }
        })
        .collect();
    TreeSpec::Surface(children)
}

/// A random valid tree within `shape`, drawn by rejection.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, shape: &TreeShape) -> FCellTree {
    loop {
        let spec = gen_surface(rng, shape.max_height, shape);
        if spec.num_leaves() <= shape.max_leaves {
            return FCellTree::new(spec).expect("library patterns are admissible");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn words_are_reduced_and_seeded() {
        let a = Alphabet::numbered("m", 3);
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let w = random_word_of_len(&a, 9, &mut r1);
            assert_eq!(w.len(), 9);
            assert_eq!(w, random_word_of_len(&a, 9, &mut r2));
        }
    }

    #[test]
    fn trees_respect_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = TreeShape::default();
        for _ in 0..20 {
            let t = random_tree(&mut rng, &shape);
            assert!(t.num_leaves() <= 8);
            assert!(t.height() <= 2);
        }
    }
}
