//! The acceptance suite, shared by the test target and `fcell selftest`.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtin::{borromean, hopf, link_corpus, tree_corpus};
use crate::milnor::{
    homotopy_witness, is_almost_trivial, is_homotopically_trivial, mu_bar, sub_indices,
    LinkPresentation,
};
use crate::obstruction::{
    bottom_meridian_word, branching_surfaces, expected_bottom_phi, obstruct_bounding,
    phi_functional, phi_of_word_with, relator_samples, vertex_word, R4Insertion, RelatorFamily,
    VariantSpec, Verdict, CONJUGATOR_LEN,
};
use crate::oracle;
use crate::random::{random_tree, random_word, TreeShape};
use crate::series::{magnus_expand, Monomial, SeriesRing, TruncatedSeries};
use crate::solid_torus::{admissibility_degree, compose, SolidTorusLink};
use crate::tree::{fig2_cell, FCellTree, TreeSpec, VertexKind};
use crate::word::{Alphabet, Word};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub const TITLES: [&str; 10] = [
    "Magnus homomorphism and truncated inverse",
    "Borromean and Hopf mu_bar against the oracle",
    "homotopy triviality and witnesses",
    "Bing doubles are admissible with unit wedge coefficient",
    "height-two cell bases and intersection pairs",
    "Q dimension recursion on random trees",
    "Phi invariance under relators and the height-one closed form",
    "meridian words have nonzero Phi",
    "obstruction certificates and composition",
    "classical degeneration on the link corpus",
];

pub fn run_criterion(id: u32, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let result = match id {
        1 => magnus_laws(seed),
        2 => oracle_values(),
        3 => triviality(),
        4 => bing_doubles(),
        5 => fig2_facts(),
        6 => dimension_recursion(seed),
        7 => relator_invariance(seed),
        8 => meridian_words(seed),
        9 => certificates(),
        10 => classical_degeneration(),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e),
    };
    CriterionReport {
        id,
        title: TITLES.get(id as usize - 1).copied().unwrap_or("unknown"),
        passed,
        detail,
        elapsed,
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=10).map(|id| run_criterion(id, seed)).collect()
}

fn magnus_laws(seed: u64) -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4);
        let q = rng.gen_range(1..=6);
        let a = Alphabet::numbered("m", k);
        let u = random_word(&a, 12, &mut rng);
        let v = random_word(&a, 12, &mut rng);
        let mu = lib(magnus_expand(&u, q))?;
        let mv = lib(magnus_expand(&v, q))?;
        let muv = lib(magnus_expand(&lib(u.multiply(&v))?, q))?;
        ensure(lib(mu.mul(&mv))? == muv, || format!("M({u})M({v}) != M({u} {v}) at q={q}"))?;
        let minv = lib(magnus_expand(&u.inverse(), q))?;
        ensure(lib(mu.mul(&minv))?.is_one(), || format!("M({u})M({u}^-1) != 1 at q={q}"))?;
        for g in 0..k {
            let ring = lib(SeriesRing::free(&a, q))?;
            let plus = TruncatedSeries::from_terms(&ring, [(Monomial::one(), 1), (Monomial::var(g), 1)]);
            let inv = TruncatedSeries::from_terms(
                &ring,
                (0..=q).map(|d| (Monomial::new(vec![g; d]), if d % 2 == 0 { 1 } else { -1 })),
            );
            ensure(lib(plus.mul(&inv))?.is_one(), || format!("truncated inverse fails at q={q}"))?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {:.2}s", t.as_secs_f64()))?;
    Ok("1000 random word pairs within 10s".into())
}

fn oracle_letters(w: &Word) -> Vec<(usize, bool)> {
    w.letters().iter().map(|l| (l.generator, l.inverse)).collect()
}

/// `μ̄` of a full index computed only from the oracle.
fn oracle_mu_bar(l: &LinkPresentation, full: &[usize]) -> (i64, i64) {
    let coeff = |idx: &[usize]| {
        let (j, i) = idx.split_last().expect("nonempty");
        oracle::coefficient(&oracle_letters(l.longitude(*j)), i)
    };
    let delta = sub_indices(full)
        .iter()
        .fold(0i64, |g, s| g.gcd(&coeff(s)));
    let v = coeff(full);
    (if delta == 0 { v } else { v.mod_floor(&delta) }, delta)
}

fn oracle_values() -> Check {
    let b = borromean();
    let r = lib(mu_bar(&b, &[0, 1], 2, 4))?;
    let (ov, od) = oracle_mu_bar(&b, &[0, 1, 2]);
    ensure(r.modulus.is_zero() && r.value.abs().is_one(), || format!("Borromean mu_bar(12;3) = {r}"))?;
    ensure(r.value == BigInt::from(ov) && od == 0, || format!("oracle gives {ov} mod {od}, library {r}"))?;
    let h = hopf();
    let r2 = lib(mu_bar(&h, &[1], 0, 3))?;
    let (hv, hd) = oracle_mu_bar(&h, &[1, 0]);
    ensure(r2.value.is_one() && r2.modulus.is_zero(), || format!("Hopf mu_bar(2;1) = {r2}"))?;
    ensure(r2.value == BigInt::from(hv) && hd == 0, || format!("oracle gives {hv} mod {hd}"))?;
    Ok(format!("mu_bar(12;3) = {r}, mu_bar(2;1) = {r2}, oracle agrees"))
}

fn triviality() -> Check {
    for n in 1..=4 {
        ensure(lib(is_homotopically_trivial(&LinkPresentation::unlink(n), n + 1))?, || {
            format!("unlink({n}) reported nontrivial")
        })?;
    }
    let hw = lib(homotopy_witness(&hopf(), 3))?.ok_or("Hopf reported trivial")?;
    ensure(hw.index == vec![1] && hw.component == 0, || format!("Hopf witness {hw}"))?;
    let b = borromean();
    let bw = lib(homotopy_witness(&b, 4))?.ok_or("Borromean reported trivial")?;
    let mut full = bw.index.clone();
    full.push(bw.component);
    let rotations: Vec<Vec<usize>> = (0..3)
        .map(|r| {
            let mut v = vec![0, 1, 2];
            v.rotate_left(r);
            v
        })
        .collect();
    let reference = lib(mu_bar(&b, &[0, 1], 2, 4))?;
    ensure(rotations.contains(&full) && bw.mu_bar == reference, || {
        format!("Borromean witness {bw}, expected a rotation of (1,2;3) with mu_bar {reference}")
    })?;
    ensure(lib(is_almost_trivial(&b, 4))?, || "Borromean not almost trivial".into())?;
    Ok(format!("unlinks trivial; Hopf witness {hw}; Borromean witness {bw}; Borromean almost trivial"))
}

fn bing_doubles() -> Check {
    let mut parts = Vec::new();
    for (name, t) in [
        ("bing_double(core)", lib(SolidTorusLink::core().bing_double())?),
        ("iterated_bing(2)", lib(SolidTorusLink::iterated_bing(2))?),
    ] {
        ensure(lib(t.is_admissible(admissibility_degree(t.len())))?, || format!("{name} not admissible"))?;
        let m = lib(t.wedge_mu())?;
        ensure(m.abs().is_one(), || format!("{name} wedge mu = {m}"))?;
        parts.push(format!("{name}: n={} mu={m}", t.len()));
    }
    Ok(parts.join("; "))
}

fn fig2_facts() -> Check {
    let t = fig2_cell();
    let parse = |s: &str| Monomial::parse(t.alphabet(), s).expect("fig2 variable");
    let rt: BTreeSet<Monomial> = t.rtilde_basis(t.root()).monomials.into_iter().collect();
    let expected: BTreeSet<Monomial> = [
        "x1.x2.x5", "x2.x1.x5", "x5.x1.x2", "x5.x2.x1", "x3.x4.x5", "x4.x3.x5", "x5.x3.x4", "x5.x4.x3",
    ]
    .iter()
    .map(|s| parse(s))
    .collect();
    ensure(rt == expected, || format!("rtilde basis has {} monomials: {rt:?}", rt.len()))?;
    let q: Vec<Monomial> = t.q_basis(t.root()).monomials;
    ensure(q == vec![parse("x1.x2.x5"), parse("x3.x4.x5")], || format!("q basis {q:?}"))?;
    let mut pairs = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            if lib(t.may_intersect(a, b))? {
                pairs.push((a + 1, b + 1));
            }
        }
    }
    ensure(pairs == vec![(1, 3), (1, 4), (2, 3), (2, 4)], || format!("intersecting pairs {pairs:?}"))?;
    Ok("8 rtilde monomials, Q = {x1.x2.x5, x3.x4.x5}, pairs (1,3) (1,4) (2,3) (2,4)".into())
}

/// `dim Q_v` computed from the recursive description alone.
fn spec_dimension(spec: &TreeSpec) -> usize {
    match spec {
        TreeSpec::Handle(_) => 1,
        TreeSpec::Surface(c) => c.iter().map(spec_dimension).sum(),
        TreeSpec::Link(_, c) => c.iter().map(spec_dimension).product(),
    }
}

fn dimension_recursion(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
    let shape = TreeShape {
        max_leaves: 12,
        max_height: 3,
        max_surface_children: 3,
    };
    let mut largest = 0;
    for i in 0..200 {
        let t = random_tree(&mut rng, &shape);
        let d = t.q_basis(t.root()).monomials.len();
        let e = spec_dimension(&t.spec());
        ensure(d == e, || format!("tree {i}: dim Q = {d}, recursion gives {e}"))?;
        largest = largest.max(d);
    }
    Ok(format!("200 random trees agree (largest dim {largest})"))
}

/// A product of conjugated meridian-word variants with random signs.
struct ValidWord {
    factors: Vec<(VariantSpec, Word, bool)>,
}

impl ValidWord {
    fn random<R: Rng>(t: &FCellTree, rng: &mut R) -> Self {
        let count = rng.gen_range(1..=2);
        let factors = (0..count)
            .map(|_| {
                (
                    VariantSpec::random_choices(t, rng),
                    random_word(t.alphabet(), CONJUGATOR_LEN, rng),
                    rng.gen_bool(0.3),
                )
            })
            .collect();
        ValidWord { factors }
    }

    fn word(&self, t: &FCellTree) -> crate::Result<Word> {
        let mut w = Word::identity(t.alphabet());
        for (spec, h, inverse) in &self.factors {
            let mut f = vertex_word(t, t.root(), spec)?.conjugate(h)?;
            if *inverse {
                f = f.inverse();
            }
            w = w.multiply(&f)?;
        }
        Ok(w)
    }

    fn expected_phi(&self, t: &FCellTree) -> BigInt {
        let base = expected_bottom_phi(t);
        self.factors
            .iter()
            .map(|(_, _, inv)| if *inv { -base.clone() } else { base.clone() })
            .sum()
    }
}

/// Every child of the bottom surface is a handle or a link over handles.
fn is_flat(t: &FCellTree) -> bool {
    let surface = t.vertex(t.root()).children[0];
    t.vertex(surface)
        .children
        .iter()
        .all(|&c| t.vertex(c).children.iter().all(|&g| t.vertex(g).is_leaf()))
}

/// `Σ_j α_j ∏_{i≠j} μ_i` for a flat tree.
fn height_one_closed_form(t: &FCellTree, w: &Word) -> crate::Result<BigInt> {
    let s = magnus_expand(w, t.num_leaves())?;
    let surface = t.vertex(t.root()).children[0];
    let kids = &t.vertex(surface).children;
    let mus: Vec<BigInt> = kids
        .iter()
        .map(|&c| match &t.vertex(c).kind {
            VertexKind::Marked { link, .. } => link.wedge_mu(),
            _ => Ok(BigInt::one()),
        })
        .collect::<crate::Result<_>>()?;
    let mut total = BigInt::zero();
    for (j, &c) in kids.iter().enumerate() {
        let y = match &t.vertex(c).kind {
            VertexKind::Leaf(k) => Monomial::var(*k),
            _ => Monomial::new(t.vertex(c).children.iter().map(|&l| match t.vertex(l).kind {
                VertexKind::Leaf(k) => k,
                _ => unreachable!("flat tree"),
            })),
        };
        let prime: BigInt = mus
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, m)| m.clone())
            .product();
        total += s.coefficient(&y) * prime;
    }
    Ok(total)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Family {
    R1,
    R2,
    R4Bottom,
    R4Inner,
}

fn relator_invariance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
    let families = [Family::R1, Family::R2, Family::R4Bottom, Family::R4Inner];
    let mut counts = [0usize; 4];
    let mut closed_forms = 0;
    for i in 0..100 {
        let family = families[i % 4];
        // inner surfaces need height two
        let height = if i % 8 < 4 && family != Family::R4Inner { 1 } else { 2 };
        let shape = TreeShape {
            max_leaves: 8,
            max_height: height,
            max_surface_children: 3,
        };
        // draw trees until the family has a relator
        let (t, bottom) = loop {
            let t = random_tree(&mut rng, &shape);
            let bottom = t.vertex(t.root()).children[0];
            let surfaces = branching_surfaces(&t);
            let ok = match family {
                Family::R1 => true,
                Family::R2 => !crate::obstruction::intersecting_pairs(&t).is_empty(),
                Family::R4Bottom => surfaces.iter().any(|&(v, _)| v == bottom),
                Family::R4Inner => surfaces.iter().any(|&(v, _)| v != bottom),
            };
            if ok {
                break (t, bottom);
            }
        };
        let phi = phi_functional(&t);
        let base = ValidWord::random(&t, &mut rng);
        let w = lib(base.word(&t))?;
        let before = lib(phi_of_word_with(&t, &phi, &w))?;
        ensure(before == base.expected_phi(&t), || {
            format!("tuple {i}: Phi(w) = {before}, expected {}", base.expected_phi(&t))
        })?;
        let h = random_word(t.alphabet(), CONJUGATOR_LEN, &mut rng);
        let sign = rng.gen_bool(0.5);
        let after_word = match family {
            Family::R1 | Family::R2 | Family::R4Bottom => {
                let want = match family {
                    Family::R1 => RelatorFamily::R1,
                    Family::R2 => RelatorFamily::R2,
                    _ => RelatorFamily::R4,
                };
                let samples = relator_samples(&t, 12, rng.gen());
                let r = samples
                    .into_iter()
                    .find(|s| s.family == want && (want != RelatorFamily::R4 || s.surface == Some(bottom)))
                    .ok_or_else(|| format!("tuple {i}: no {want} sample"))?;
                let mut r = lib(r.word.conjugate(&h))?;
                if sign {
                    r = r.inverse();
                }
                lib(w.multiply(&r))?
            }
            Family::R4Inner => {
                let inner: Vec<(usize, usize)> = branching_surfaces(&t)
                    .into_iter()
                    .filter(|&(v, _)| v != bottom)
                    .collect();
                let (v, n) = inner[rng.gen_range(0..inner.len())];
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                let mut modified = ValidWord {
                    factors: base.factors.clone(),
                };
                let k = rng.gen_range(0..modified.factors.len());
                modified.factors[k].0.insertions.entry(v).or_default().push(R4Insertion {
                    a,
                    b,
                    conjugator: h.clone(),
                    inverse: sign,
                });
                lib(modified.word(&t))?
            }
        };
        let after = lib(phi_of_word_with(&t, &phi, &after_word))?;
        ensure(before == after, || {
            format!("tuple {i} ({family:?}): Phi changed from {before} to {after}")
        })?;
        counts[i % 4] += 1;
        if is_flat(&t) {
            for word in [&w, &after_word] {
                let c = lib(height_one_closed_form(&t, word))?;
                let p = lib(phi_of_word_with(&t, &phi, word))?;
                ensure(c == p, || format!("tuple {i}: closed form {c}, Phi {p}"))?;
            }
            closed_forms += 1;
        }
    }
    Ok(format!(
        "100 tuples invariant (R1 {}, R2 {}, R4 bottom {}, R4 inner {}); {} height-one closed forms match",
        counts[0], counts[1], counts[2], counts[3], closed_forms
    ))
}

fn meridian_words(seed: u64) -> Check {
    let mut count = 0;
    for (name, t) in tree_corpus() {
        let w = lib(bottom_meridian_word(&t)).map_err(|e| format!("{name}: {e}"))?;
        let v = lib(crate::obstruction::phi_of_word(&t, &w))?;
        ensure(!v.is_zero(), || format!("{name}: Phi vanishes"))?;
        count += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
    let shape = TreeShape::default();
    for i in 0..50 {
        let t = random_tree(&mut rng, &shape);
        let w = lib(bottom_meridian_word(&t)).map_err(|e| format!("random tree {i}: {e}"))?;
        let v = lib(crate::obstruction::phi_of_word(&t, &w))?;
        ensure(!v.is_zero(), || format!("random tree {i}: Phi vanishes"))?;
    }
    Ok(format!("{count} built-in trees and 50 random trees"))
}

fn certificates() -> Check {
    let b = borromean();
    let handle = FCellTree::single_handle();
    let fig1 = crate::tree::fig1_cell();
    let c1 = lib(obstruct_bounding(&b, &vec![handle.clone(); 3], 4))?;
    ensure(c1.verdict == Verdict::Obstructed, || format!("handles: {:?}", c1.verdict))?;
    let c2 = lib(obstruct_bounding(&b, &[fig1.clone(), handle.clone(), handle.clone()], 4))?;
    ensure(c2.verdict == Verdict::Obstructed, || format!("fig1: {:?}", c2.verdict))?;
    let u = LinkPresentation::unlink(3);
    for trees in [
        vec![handle.clone(); 3],
        vec![fig1.clone(), handle.clone(), handle.clone()],
        vec![fig2_cell(), fig1.clone(), handle.clone()],
    ] {
        let c = lib(obstruct_bounding(&u, &trees, 4))?;
        ensure(c.verdict == Verdict::Inconclusive, || "unlink obstructed".into())?;
    }
    let bing = lib(SolidTorusLink::core().bing_double())?;
    let composed = lib(compose(&hopf(), &bing))?;
    ensure(!lib(is_homotopically_trivial(&composed, 4))?, || "compose(hopf, bing(1)) trivial".into())?;
    Ok(format!(
        "Borromean obstructed (phi {} and {}); unlink inconclusive; composition essential",
        c1.phi_value, c2.phi_value
    ))
}

fn classical_degeneration() -> Check {
    let corpus = link_corpus();
    for (name, l) in &corpus {
        let q = l.len() + 1;
        let trivial = lib(is_homotopically_trivial(l, q))?;
        let c = lib(obstruct_bounding(l, &vec![FCellTree::single_handle(); l.len()], q))
            .map_err(|e| format!("{name}: {e}"))?;
        ensure((c.verdict == Verdict::Obstructed) == !trivial, || {
            format!("{name}: verdict {:?} but trivial = {trivial}", c.verdict)
        })?;
    }
    Ok(format!("{} links agree", corpus.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_dimension_matches_fig1() {
        let t = crate::tree::fig1_cell();
        assert_eq!(spec_dimension(&t.spec()), 2);
    }

    #[test]
    fn oracle_mu_bar_of_hopf() {
        assert_eq!(oracle_mu_bar(&hopf(), &[1, 0]), (1, 0));
    }
}
