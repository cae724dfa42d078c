//! The functional `Φ` on a tree's `Q` space, meridian words, relator
//! families and the obstruction certificate for links.
//!
//! At a surface vertex the children are weighted by `ν'_i = ∏_{k≠i} ν_k`,
//! where `ν_k` is the value of the child's functional on the image of its own
//! meridian word. At a marked vertex `ν = μ ∏_j ν_j` over its children; a
//! handle has `ν = 1`. When every deeper `μ` is `1` these weights are the
//! products of the surface children's leading coefficients.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::milnor::{is_almost_trivial, LinkPresentation, MuResidue, MuTable};
use crate::random::random_word;
use crate::series::{magnus_expand_in, Monomial, PairIdeal, SeriesRing, TruncatedSeries};
use crate::tree::{FCellTree, Membership, NodeId, VertexKind};
use crate::word::{Alphabet, Homomorphism, Word};

/// Values of `Φ` on the `Q` basis monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiFunctional {
    vars: Alphabet,
    table: BTreeMap<Monomial, BigInt>,
}

impl PhiFunctional {
    pub fn vars(&self) -> &Alphabet {
        &self.vars
    }

    pub fn value(&self, m: &Monomial) -> BigInt {
        self.table.get(m).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `Σ_Y coefficient(s, Y) Φ(Y)`.
    pub fn evaluate(&self, s: &TruncatedSeries) -> BigInt {
        self.table
            .iter()
            .map(|(m, v)| s.coefficient(m) * v)
            .sum()
    }
}

impl fmt::Display for PhiFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, v)) in self.table.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "Phi({}) = {v}", m.render(&self.vars))?;
        }
        Ok(())
    }
}

/// How surface children are weighted.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Weighting {
    /// `ν` weights described in the module documentation.
    Meridian,
    /// Products of the children's leading wedge coefficients only.
    LeadingMu,
}

struct VertexPhi {
    table: BTreeMap<Monomial, BigInt>,
    nu: BigInt,
    mu: BigInt,
}

fn vertex_phi(t: &FCellTree, v: NodeId, weighting: Weighting) -> VertexPhi {
    let vx = t.vertex(v);
    match &vx.kind {
        VertexKind::Leaf(k) => VertexPhi {
            table: BTreeMap::from([(Monomial::var(*k), BigInt::one())]),
            nu: BigInt::one(),
            mu: BigInt::one(),
        },
        VertexKind::Marked { mu, .. } => {
            let kids: Vec<VertexPhi> = vx.children.iter().map(|&c| vertex_phi(t, c, weighting)).collect();
            let mut table = BTreeMap::from([(Monomial::one(), BigInt::one())]);
            for k in &kids {
                let mut next = BTreeMap::new();
                for (m, a) in &table {
                    for (n, b) in &k.table {
                        next.insert(m.concat(n), a * b);
                    }
                }
                table = next;
            }
            let nu = kids.iter().fold(mu.clone(), |acc, k| acc * &k.nu);
            VertexPhi {
                table,
                nu,
                mu: mu.clone(),
            }
        }
        VertexKind::Unmarked => {
            let kids: Vec<VertexPhi> = vx.children.iter().map(|&c| vertex_phi(t, c, weighting)).collect();
            let weights: Vec<&BigInt> = kids
                .iter()
                .map(|k| match weighting {
                    Weighting::Meridian => &k.nu,
                    Weighting::LeadingMu => &k.mu,
                })
                .collect();
            let mut table = BTreeMap::new();
            for (i, k) in kids.iter().enumerate() {
                let w: BigInt = weights
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, w)| (*w).clone())
                    .product();
                for (m, a) in &k.table {
                    table.insert(m.clone(), a * &w);
                }
            }
            let nu = kids.iter().map(|k| k.nu.clone()).product();
            VertexPhi {
                table,
                nu,
                mu: BigInt::one(),
            }
        }
    }
}

/// `Φ` at the root of the tree.
pub fn phi_functional(t: &FCellTree) -> PhiFunctional {
    phi_functional_weighted(t, Weighting::Meridian)
}

pub fn phi_functional_weighted(t: &FCellTree, weighting: Weighting) -> PhiFunctional {
    PhiFunctional {
        vars: t.alphabet().clone(),
        table: vertex_phi(t, t.root(), weighting).table,
    }
}

/// `Φ(p₂ p₁ M(w))` for a word in the handle meridians.
pub fn phi_of_word(t: &FCellTree, w: &Word) -> Result<BigInt> {
    phi_of_word_with(t, &phi_functional(t), w)
}

/// As [`phi_of_word`] with a precomputed functional.
pub fn phi_of_word_with(t: &FCellTree, phi: &PhiFunctional, w: &Word) -> Result<BigInt> {
    let s = magnus_expand_in(w, &t.full_ring())?;
    if let Membership::Offending(m) = t.s_membership(&s, t.root())? {
        return Err(Error::NotInSubring(m.render(t.alphabet())));
    }
    Ok(phi.evaluate(&s))
}

/// Inner `W_a W_b⁻¹` relator inserted at a surface while building a
/// meridian word: the surface's word is multiplied by `(W_a W_b⁻¹)^{±h}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct R4Insertion {
    pub a: usize,
    pub b: usize,
    pub conjugator: Word,
    pub inverse: bool,
}

/// Choices made while building a meridian word: which child each surface
/// follows (default the first) and which relators are inserted where.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VariantSpec {
    pub choices: BTreeMap<NodeId, usize>,
    pub insertions: BTreeMap<NodeId, Vec<R4Insertion>>,
}

impl VariantSpec {
    /// Random child choices at every surface.
    pub fn random_choices<R: Rng + ?Sized>(t: &FCellTree, rng: &mut R) -> Self {
        let mut spec = VariantSpec::default();
        for v in 1..t.num_vertices() {
            let vx = t.vertex(v);
            if matches!(vx.kind, VertexKind::Unmarked) && vx.children.len() > 1 {
                spec.choices.insert(v, rng.gen_range(0..vx.children.len()));
            }
        }
        spec
    }
}

/// The word of vertex `v` under `spec`: a handle's meridian; the wedge word of
/// a marked vertex with its children's words substituted and `y ↦ 1`; the
/// chosen child's word at a surface, times any inserted relators.
pub fn vertex_word(t: &FCellTree, v: NodeId, spec: &VariantSpec) -> Result<Word> {
    let vx = t.vertex(v);
    let a = t.alphabet();
    match &vx.kind {
        VertexKind::Leaf(k) => Ok(Word::generator(a, *k)),
        VertexKind::Marked { link, .. } => {
            let wedge = link.wedge_word();
            let mut h = Homomorphism::new(wedge.alphabet(), a);
            for (p, &c) in vx.children.iter().enumerate() {
                h.set_index(link.preferred_order()[p], vertex_word(t, c, spec)?)?;
            }
            h.set_index(link.len(), Word::identity(a))?;
            h.apply(wedge)
        }
        VertexKind::Unmarked => {
            let choice = spec.choices.get(&v).copied().unwrap_or(0);
            let child = *vx.children.get(choice).ok_or_else(|| {
                Error::InvalidIndex(format!("surface {v} has no child {choice}"))
            })?;
            let mut w = vertex_word(t, child, spec)?;
            for ins in spec.insertions.get(&v).into_iter().flatten() {
                let r = sibling_relator(t, v, ins.a, ins.b, spec)?;
                let mut r = r.conjugate(&ins.conjugator)?;
                if ins.inverse {
                    r = r.inverse();
                }
                w = w.multiply(&r)?;
            }
            Ok(w)
        }
    }
}

/// `W_a W_b⁻¹` for children `a`, `b` of the surface `v`.
pub fn sibling_relator(t: &FCellTree, v: NodeId, a: usize, b: usize, spec: &VariantSpec) -> Result<Word> {
    let vx = t.vertex(v);
    if !matches!(vx.kind, VertexKind::Unmarked) || a >= vx.children.len() || b >= vx.children.len() {
        return Err(Error::InvalidIndex(format!("children {a}, {b} of vertex {v}")));
    }
    let inner = VariantSpec {
        choices: spec.choices.clone(),
        insertions: BTreeMap::new(),
    };
    let wa = vertex_word(t, vx.children[a], &inner)?;
    let wb = vertex_word(t, vx.children[b], &inner)?;
    wa.multiply(&wb.inverse())
}

/// The meridian word of the bottom surface, checked to lie in `S_0` with
/// nonzero `Φ`.
pub fn bottom_meridian_word(t: &FCellTree) -> Result<Word> {
    let w = vertex_word(t, t.root(), &VariantSpec::default())?;
    match phi_of_word(t, &w) {
        Ok(v) if !v.is_zero() => Ok(w),
        Ok(_) => Err(Error::Postcondition("Phi vanishes on the meridian word".into())),
        Err(Error::NotInSubring(m)) => Err(Error::Postcondition(format!(
            "meridian word leaves S_0 at term {m}"
        ))),
        Err(e) => Err(e),
    }
}

/// `Φ` of the bottom meridian word computed from the weights alone.
pub fn expected_bottom_phi(t: &FCellTree) -> BigInt {
    vertex_phi(t, t.root(), Weighting::Meridian).nu
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum RelatorFamily {
    R1,
    R2,
    R4,
}

impl fmt::Display for RelatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelatorSample {
    pub family: RelatorFamily,
    pub word: Word,
    /// Surface vertex of an `R4` sample.
    pub surface: Option<NodeId>,
    /// Handles for `R1`/`R2`, sibling positions for `R4`.
    pub pair: (usize, usize),
}

/// Default bound on conjugator length.
pub const CONJUGATOR_LEN: usize = 4;

/// Surfaces with at least two children, as `(vertex, child count)`.
pub fn branching_surfaces(t: &FCellTree) -> Vec<(NodeId, usize)> {
    (1..t.num_vertices())
        .filter_map(|v| {
            let vx = t.vertex(v);
            (matches!(vx.kind, VertexKind::Unmarked) && vx.children.len() > 1)
                .then_some((v, vx.children.len()))
        })
        .collect()
}

/// Handle pairs allowed to intersect.
pub fn intersecting_pairs(t: &FCellTree) -> Vec<(usize, usize)> {
    (0..t.num_leaves())
        .tuple_combinations()
        .filter(|&(a, b)| t.may_intersect(a, b).unwrap_or(false))
        .collect()
}

/// `count` relators cycling through the available families, deterministic in
/// `seed`.
pub fn relator_samples(t: &FCellTree, count: usize, seed: u64) -> Vec<RelatorSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = t.alphabet();
    let pairs = intersecting_pairs(t);
    let surfaces = branching_surfaces(t);
    let mut families = vec![RelatorFamily::R1];
    if !pairs.is_empty() {
        families.push(RelatorFamily::R2);
    }
    if !surfaces.is_empty() {
        families.push(RelatorFamily::R4);
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let family = families[i % families.len()];
        let sample = match family {
            RelatorFamily::R1 | RelatorFamily::R2 => {
                let (x, y) = if family == RelatorFamily::R1 {
                    let k = rng.gen_range(0..t.num_leaves());
                    (k, k)
                } else {
                    pairs[rng.gen_range(0..pairs.len())]
                };
                let f = random_word(a, CONJUGATOR_LEN, &mut rng);
                let g = random_word(a, CONJUGATOR_LEN, &mut rng);
                let word = Word::generator(a, x)
                    .conjugate(&f)
                    .and_then(|u| u.commutator(&Word::generator(a, y).conjugate(&g)?))
                    .expect("same alphabet");
                RelatorSample {
                    family,
                    word,
                    surface: None,
                    pair: (x, y),
                }
            }
            RelatorFamily::R4 => {
                let (v, n) = surfaces[rng.gen_range(0..surfaces.len())];
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let word = sibling_relator(t, v, i, j, &VariantSpec::default()).expect("valid children");
                RelatorSample {
                    family,
                    word,
                    surface: Some(v),
                    pair: (i, j),
                }
            }
        };
        out.push(sample);
    }
    out
}

/// Several trees side by side, with handles renamed `x<i>` (single-handle
/// trees) or `x<i>_<j>`.
#[derive(Clone, Debug)]
pub struct Collection {
    trees: Vec<FCellTree>,
    alphabet: Alphabet,
    offsets: Vec<usize>,
}

impl Collection {
    pub fn new(trees: Vec<FCellTree>) -> Result<Self> {
        let mut names = Vec::new();
        let mut vars = Vec::new();
        let mut offsets = Vec::new();
        for (i, t) in trees.iter().enumerate() {
            offsets.push(names.len());
            for j in 0..t.num_leaves() {
                let suffix = if t.num_leaves() == 1 {
                    format!("{}", i + 1)
                } else {
                    format!("{}_{}", i + 1, j + 1)
                };
                names.push(format!("m{suffix}"));
                vars.push(format!("x{suffix}"));
            }
        }
        Ok(Collection {
            alphabet: Alphabet::with_variables(names, vars)?,
            trees,
            offsets,
        })
    }

    pub fn trees(&self) -> &[FCellTree] {
        &self.trees
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Handles of different trees never interact; within a tree the tree's
    /// own pairs are killed.
    pub fn ring(&self) -> Result<SeriesRing> {
        let mut ideal = PairIdeal::repeats(self.alphabet.len());
        for (t, &off) in self.trees.iter().zip(&self.offsets) {
            let inner = t.ideal();
            for a in 0..t.num_leaves() {
                for b in a + 1..t.num_leaves() {
                    if inner.is_forbidden(a, b) {
                        ideal.forbid(off + a, off + b);
                    }
                }
            }
        }
        SeriesRing::with_ideal(&self.alphabet, self.alphabet.len().max(1), ideal)
    }

    pub fn embed_word(&self, i: usize, w: &Word) -> Result<Word> {
        let t = &self.trees[i];
        let mut h = Homomorphism::new(t.alphabet(), &self.alphabet);
        for k in 0..t.num_leaves() {
            h.set_index(k, Word::generator(&self.alphabet, self.offsets[i] + k))?;
        }
        h.apply(w)
    }

    pub fn embed_monomial(&self, i: usize, m: &Monomial) -> Monomial {
        Monomial::new(m.vars().map(|v| v + self.offsets[i]))
    }

    /// `Φ = ⊗ Φ_i` on concatenations `Y_{σ(1)} ⋯ Y_{σ(n)}`.
    pub fn phi(&self, order: &[usize]) -> PhiFunctional {
        let mut table = BTreeMap::from([(Monomial::one(), BigInt::one())]);
        for &i in order {
            let phi_i = phi_functional(&self.trees[i]);
            let mut next = BTreeMap::new();
            for (m, a) in &table {
                for (y, b) in phi_i.entries() {
                    next.insert(m.concat(&self.embed_monomial(i, y)), a * b);
                }
            }
            table = next;
        }
        PhiFunctional {
            vars: self.alphabet.clone(),
            table,
        }
    }
}

/// `Φ` of a collection in the given tree order.
pub fn collection_phi(trees: &[FCellTree]) -> Result<PhiFunctional> {
    let c = Collection::new(trees.to_vec())?;
    Ok(c.phi(&(0..trees.len()).collect::<Vec<_>>()))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Verdict {
    Obstructed,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Outcome of [`obstruct_bounding`].
#[derive(Clone, Debug)]
pub struct PhiCertificate {
    pub link: LinkPresentation,
    pub trees: Vec<FCellTree>,
    /// Component order `σ`; the invariant is `μ̄(σ(1),…,σ(n-1); σ(n))`.
    pub order: Vec<usize>,
    pub mu_link: MuResidue,
    pub phi_value: BigInt,
    pub verdict: Verdict,
    pub witness_monomial: String,
}

/// Tries to show that the components of `l` cannot bound disjoint copies of
/// the given cells.
///
/// Refuses links that are not almost homotopically trivial, since then the
/// full-length invariant is not a well-defined integer.
pub fn obstruct_bounding(l: &LinkPresentation, trees: &[FCellTree], q: usize) -> Result<PhiCertificate> {
    let n = l.len();
    if trees.len() != n {
        return Err(Error::InvalidLink(format!(
            "{n} components but {} trees",
            trees.len()
        )));
    }
    if q < n + 1 {
        return Err(Error::DegreeTooSmall { q, needed: n + 1 });
    }
    if !is_almost_trivial(l, q)? {
        return Err(Error::Refusal(
            "link is not almost homotopically trivial, so the full-length mu_bar is not an integer invariant"
                .into(),
        ));
    }
    let coll = Collection::new(trees.to_vec())?;
    let inconclusive = |order: Vec<usize>, mu_link: MuResidue| PhiCertificate {
        link: l.clone(),
        trees: trees.to_vec(),
        witness_monomial: witness_name(&coll, &order),
        order,
        mu_link,
        phi_value: BigInt::zero(),
        verdict: Verdict::Inconclusive,
    };
    if n == 1 {
        return Ok(inconclusive(vec![0], MuResidue::new(BigInt::zero(), BigInt::zero())));
    }

    let table = MuTable::non_repeating(l, q)?;
    let mut found = None;
    for order in (0..n).permutations(n) {
        let r = table.mu_bar(&order)?;
        if !r.modulus.is_zero() {
            return Err(Error::Refusal(format!("mu_bar has nonzero modulus {}", r.modulus)));
        }
        if !r.is_zero() {
            found = Some((order, r));
            break;
        }
    }
    let Some((order, mu_link)) = found else {
        let id: Vec<usize> = (0..n).collect();
        let r = table.mu_bar(&id)?;
        return Ok(inconclusive(id, r));
    };

    let last = order[n - 1];
    let relator = Word::generator(l.meridians(), last).commutator(l.longitude(last))?;
    let mut h = Homomorphism::new(l.meridians(), coll.alphabet());
    for (i, t) in trees.iter().enumerate() {
        h.set_index(i, coll.embed_word(i, &bottom_meridian_word(t)?)?)?;
    }
    let image = h.apply(&relator)?;
    let s = magnus_expand_in(&image, &coll.ring()?)?;
    let phi_value = coll.phi(&order).evaluate(&s);
    let verdict = if !mu_link.is_zero() && !phi_value.is_zero() {
        Verdict::Obstructed
    } else {
        Verdict::Inconclusive
    };
    Ok(PhiCertificate {
        link: l.clone(),
        trees: trees.to_vec(),
        witness_monomial: witness_name(&coll, &order),
        order,
        mu_link,
        phi_value,
        verdict,
    })
}

/// Leading monomial `Y_{σ(1)} ⋯ Y_{σ(n)}` built from each tree's bottom word.
fn witness_name(coll: &Collection, order: &[usize]) -> String {
    let m = order.iter().fold(Monomial::one(), |acc, &i| {
        let t = &coll.trees()[i];
        let first = t.q_basis(t.root()).monomials.into_iter().next().unwrap_or_default();
        acc.concat(&coll.embed_monomial(i, &first))
    });
    m.render(coll.alphabet())
}
