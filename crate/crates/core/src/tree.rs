//! Trees of flexible cells and the graded quotient ring they define.
//!
//! The root is an implicit unmarked vertex with a single child, the body
//! surface. Unmarked (surface) vertices have marked vertices or handles as
//! children; marked vertices carry a [`SolidTorusLink`] and have one child per
//! link component, listed in the link's preferred order, each a handle or a
//! surface. Handles are the leaves, numbered left to right in the stored
//! planar embedding; that numbering is the variable order of the tree ring.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{Monomial, PairIdeal, SeriesRing, TruncatedSeries};
use crate::solid_torus::SolidTorusLink;
use crate::word::Alphabet;

pub type NodeId = usize;

/// Recursive description of a tree below the root, used for construction
/// and serialization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TreeSpec {
    Surface(Vec<TreeSpec>),
    Link(Arc<SolidTorusLink>, Vec<TreeSpec>),
    /// A handle with an optional variable name; unnamed handles get `x<k>`
    /// from their left-to-right position.
    Handle(Option<String>),
}

impl TreeSpec {
    pub fn handle() -> Self {
        TreeSpec::Handle(None)
    }

    pub fn named(var: &str) -> Self {
        TreeSpec::Handle(Some(var.to_string()))
    }

    pub fn link(l: SolidTorusLink, children: Vec<TreeSpec>) -> Self {
        TreeSpec::Link(Arc::new(l), children)
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            TreeSpec::Handle(_) => 1,
            TreeSpec::Surface(c) | TreeSpec::Link(_, c) => c.iter().map(TreeSpec::num_leaves).sum(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VertexKind {
    Unmarked,
    Marked { link: Arc<SolidTorusLink>, mu: BigInt },
    Leaf(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vertex {
    pub kind: VertexKind,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
}

impl Vertex {
    pub fn is_marked(&self) -> bool {
        matches!(self.kind, VertexKind::Marked { .. })
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, VertexKind::Leaf(_))
    }
}

/// A validated flexible-cell tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FCellTree {
    vertices: Vec<Vertex>,
    leaves: Vec<NodeId>,
    alphabet: Alphabet,
}

fn meridian_name(var: &str) -> String {
    match var.strip_prefix('x') {
        Some(rest) if !rest.is_empty() => format!("m{rest}"),
        _ => format!("m_{var}"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisKind {
    Rtilde,
    Q,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubspaceBasis {
    pub vertex: NodeId,
    pub kind: BasisKind,
    pub monomials: Vec<Monomial>,
}

/// Result of testing a series for membership in `S_v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Membership {
    Member,
    Offending(Monomial),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

impl FCellTree {
    /// Builds the tree whose body surface is `body`.
    pub fn new(body: TreeSpec) -> Result<Self> {
        if !matches!(body, TreeSpec::Surface(_)) {
            return Err(Error::InvalidTree(
                "the root's child must be a surface".into(),
            ));
        }
        let mut vertices = vec![Vertex {
            kind: VertexKind::Unmarked,
            children: Vec::new(),
            parent: None,
        }];
        let mut leaves = Vec::new();
        let mut vars: Vec<Option<String>> = Vec::new();
        let top = Self::build(&body, 0, &mut vertices, &mut leaves, &mut vars)?;
        vertices[0].children.push(top);

        let vars: Vec<String> = vars
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.unwrap_or_else(|| format!("x{}", k + 1)))
            .collect();
        let names = vars.iter().map(|v| meridian_name(v)).collect();
        let alphabet = Alphabet::with_variables(names, vars).map_err(|e| match e {
            Error::DuplicateGenerator(v) => Error::InvalidTree(format!("duplicate handle variable {v}")),
            other => Error::InvalidTree(other.to_string()),
        })?;
        Ok(FCellTree {
            vertices,
            leaves,
            alphabet,
        })
    }

    fn build(
        spec: &TreeSpec,
        parent: NodeId,
        vertices: &mut Vec<Vertex>,
        leaves: &mut Vec<NodeId>,
        vars: &mut Vec<Option<String>>,
    ) -> Result<NodeId> {
        let id = vertices.len();
        let (kind, children) = match spec {
            TreeSpec::Handle(v) => {
                leaves.push(id);
                vars.push(v.clone());
                (VertexKind::Leaf(leaves.len() - 1), &[][..])
            }
            TreeSpec::Surface(children) => {
                if children.is_empty() {
                    return Err(Error::InvalidTree("surface without children".into()));
                }
                if children.iter().any(|c| matches!(c, TreeSpec::Surface(_))) {
                    return Err(Error::InvalidTree(
                        "a surface may only carry links and handles".into(),
                    ));
                }
                (VertexKind::Unmarked, &children[..])
            }
            TreeSpec::Link(link, children) => {
                if children.len() != link.len() {
                    return Err(Error::InvalidTree(format!(
                        "link with {} components has {} children",
                        link.len(),
                        children.len()
                    )));
                }
                if children.iter().any(|c| matches!(c, TreeSpec::Link(..))) {
                    return Err(Error::InvalidTree(
                        "a link may only carry surfaces and handles".into(),
                    ));
                }
                link.ensure_admissible()?;
                let mu = link.wedge_mu()?;
                (
                    VertexKind::Marked {
                        link: link.clone(),
                        mu,
                    },
                    &children[..],
                )
            }
        };
        vertices.push(Vertex {
            kind,
            children: Vec::new(),
            parent: Some(parent),
        });
        for c in children {
            let cid = Self::build(c, id, vertices, leaves, vars)?;
            vertices[id].children.push(cid);
        }
        Ok(id)
    }

    /// A body surface with a single handle.
    pub fn single_handle() -> Self {
        Self::new(TreeSpec::Surface(vec![TreeSpec::handle()])).expect("valid")
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn vertex(&self, v: NodeId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf vertices in variable order.
    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    /// Handle meridians `m…` carrying the leaf variables `x…`.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn leaf_index(&self, var: &str) -> Option<usize> {
        self.alphabet.variable_index(var)
    }

    pub fn spec(&self) -> TreeSpec {
        self.spec_of(self.vertices[0].children[0])
    }

    fn spec_of(&self, v: NodeId) -> TreeSpec {
        let vx = &self.vertices[v];
        let children = || vx.children.iter().map(|&c| self.spec_of(c)).collect();
        match &vx.kind {
            VertexKind::Leaf(k) => TreeSpec::Handle(Some(self.alphabet.variable(*k).to_string())),
            VertexKind::Unmarked => TreeSpec::Surface(children()),
            VertexKind::Marked { link, .. } => TreeSpec::Link(link.clone(), children()),
        }
    }

    fn marked_on_path(&self, mut v: NodeId) -> usize {
        let mut count = 0;
        while let Some(p) = self.vertices[v].parent {
            if self.vertices[p].is_marked() {
                count += 1;
            }
            v = p;
        }
        count
    }

    /// Largest number of marked vertices on a path from the root to a leaf.
    pub fn height(&self) -> usize {
        self.leaves
            .iter()
            .map(|&l| self.marked_on_path(l))
            .max()
            .unwrap_or(0)
    }

    /// Inserts surface and core stages above shallow handles so that every
    /// handle lies below the same number of marked vertices.
    pub fn uniformize(&self) -> Result<FCellTree> {
        let h = self.height();
        let spec = self.uniform_spec(self.vertices[0].children[0], 0, h);
        FCellTree::new(spec)
    }

    fn uniform_spec(&self, v: NodeId, marked_above: usize, h: usize) -> TreeSpec {
        let vx = &self.vertices[v];
        match &vx.kind {
            VertexKind::Leaf(k) => {
                let parent_marked = self.vertices[vx.parent.expect("leaf has parent")].is_marked();
                let core = Arc::new(SolidTorusLink::core());
                let mut spec = TreeSpec::Handle(Some(self.alphabet.variable(*k).to_string()));
                let d = h - marked_above;
                for step in 0..d {
                    spec = TreeSpec::Link(core.clone(), vec![spec]);
                    if step + 1 < d || parent_marked {
                        spec = TreeSpec::Surface(vec![spec]);
                    }
                }
                spec
            }
            VertexKind::Unmarked => TreeSpec::Surface(
                vx.children
                    .iter()
                    .map(|&c| self.uniform_spec(c, marked_above, h))
                    .collect(),
            ),
            VertexKind::Marked { link, .. } => TreeSpec::Link(
                link.clone(),
                vx.children
                    .iter()
                    .map(|&c| self.uniform_spec(c, marked_above + 1, h))
                    .collect(),
            ),
        }
    }

    /// First common ancestor of two leaves (by variable index) and whether it
    /// is marked.
    pub fn first_common_ancestor(&self, a: usize, b: usize) -> Result<(NodeId, bool)> {
        let n = self.num_leaves();
        if a >= n || b >= n {
            return Err(Error::InvalidIndex(format!("leaf {} or {} of {n}", a + 1, b + 1)));
        }
        let mut ancestors = BTreeSet::new();
        let mut v = Some(self.leaves[a]);
        while let Some(x) = v {
            ancestors.insert(x);
            v = self.vertices[x].parent;
        }
        let mut v = self.leaves[b];
        while !ancestors.contains(&v) {
            v = self.vertices[v].parent.expect("root is a common ancestor");
        }
        Ok((v, self.vertices[v].is_marked()))
    }

    /// Whether two distinct handles are allowed to intersect, that is, their
    /// first common ancestor is unmarked.
    pub fn may_intersect(&self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Ok(false);
        }
        let (v, marked) = self.first_common_ancestor(a, b)?;
        Ok(!marked && !self.vertices[v].is_leaf())
    }

    /// Pairs killed in the tree ring: repeats and intersecting handle pairs.
    pub fn ideal(&self) -> PairIdeal {
        let n = self.num_leaves();
        let mut p = PairIdeal::repeats(n);
        for a in 0..n {
            for b in a + 1..n {
                if self.may_intersect(a, b).expect("in range") {
                    p.forbid(a, b);
                }
            }
        }
        p
    }

    /// The tree ring truncated at degree `q`.
    pub fn ring(&self, q: usize) -> Result<SeriesRing> {
        SeriesRing::with_ideal(&self.alphabet, q, self.ideal())
    }

    /// The tree ring at the degree of its longest surviving monomial.
    pub fn full_ring(&self) -> SeriesRing {
        self.ring(self.num_leaves().max(1)).expect("nonzero degree")
    }

    pub fn is_admissible_monomial(&self, m: &Monomial) -> bool {
        m.vars().all(|v| v < self.num_leaves()) && !self.ideal().kills(m)
    }

    /// Image in the tree ring; the series must be over the tree's handles.
    pub fn rc_project(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let ring = self.ring(s.ring().degree())?;
        s.project(&ring)
    }

    /// Monomials read from every branch choice at unmarked vertices and every
    /// child order at marked vertices below `v`.
    pub fn rtilde_basis(&self, v: NodeId) -> SubspaceBasis {
        let mut monomials: Vec<Monomial> = self.rtilde(v).into_iter().collect();
        monomials.sort();
        SubspaceBasis {
            vertex: v,
            kind: BasisKind::Rtilde,
            monomials,
        }
    }

    fn rtilde(&self, v: NodeId) -> BTreeSet<Monomial> {
        let vx = &self.vertices[v];
        match &vx.kind {
            VertexKind::Leaf(k) => BTreeSet::from([Monomial::var(*k)]),
            VertexKind::Unmarked => vx.children.iter().flat_map(|&c| self.rtilde(c)).collect(),
            VertexKind::Marked { .. } => {
                let parts: Vec<Vec<Monomial>> = vx
                    .children
                    .iter()
                    .map(|&c| self.rtilde(c).into_iter().collect())
                    .collect();
                let mut out = BTreeSet::new();
                for perm in (0..parts.len()).permutations(parts.len()) {
                    for pick in perm.iter().map(|&i| parts[i].iter()).multi_cartesian_product() {
                        out.insert(pick.into_iter().fold(Monomial::one(), |acc, m| acc.concat(m)));
                    }
                }
                out
            }
        }
    }

    /// Monomials read in the stored planar embedding only.
    pub fn q_basis(&self, v: NodeId) -> SubspaceBasis {
        let mut monomials = self.q_list(v);
        monomials.sort();
        monomials.dedup();
        SubspaceBasis {
            vertex: v,
            kind: BasisKind::Q,
            monomials,
        }
    }

    fn q_list(&self, v: NodeId) -> Vec<Monomial> {
        let vx = &self.vertices[v];
        match &vx.kind {
            VertexKind::Leaf(k) => vec![Monomial::var(*k)],
            VertexKind::Unmarked => vx.children.iter().flat_map(|&c| self.q_list(c)).collect(),
            VertexKind::Marked { .. } => vx
                .children
                .iter()
                .map(|&c| self.q_list(c))
                .multi_cartesian_product()
                .map(|ms| ms.iter().fold(Monomial::one(), |acc, m| acc.concat(m)))
                .collect(),
        }
    }

    /// Whether `s` is `1` plus basis monomials of `R̃_v` plus terms strictly
    /// containing such a monomial as a scattered subsequence.
    pub fn s_membership(&self, s: &TruncatedSeries, v: NodeId) -> Result<Membership> {
        self.check_vars(s)?;
        let basis = self.rtilde(v);
        for (m, c) in s.terms() {
            let ok = if m.is_one() {
                c.is_one()
            } else {
                basis.contains(m)
                    || basis
                        .iter()
                        .take_while(|b| b.degree() < m.degree())
                        .any(|b| m.contains_subsequence(b))
            };
            if !ok {
                return Ok(Membership::Offending(m.clone()));
            }
        }
        if s.coefficient(&Monomial::one()) != BigInt::one() {
            return Ok(Membership::Offending(Monomial::one()));
        }
        Ok(Membership::Member)
    }

    fn check_vars(&self, s: &TruncatedSeries) -> Result<()> {
        if s.ring().vars() != &self.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "series over {} but tree handles are {}",
                s.ring().vars(),
                self.alphabet
            )));
        }
        Ok(())
    }

    /// `1` plus the `R̃_v` part of a member of `S_v`.
    pub fn p1(&self, s: &TruncatedSeries, v: NodeId) -> Result<TruncatedSeries> {
        if let Membership::Offending(m) = self.s_membership(s, v)? {
            return Err(Error::NotInSubring(m.render(&self.alphabet)));
        }
        let basis = self.rtilde(v);
        Ok(s.filter(|m| m.is_one() || basis.contains(m)))
    }

    /// `1` plus the `Q_v` part.
    pub fn p2(&self, s: &TruncatedSeries, v: NodeId) -> Result<TruncatedSeries> {
        self.check_vars(s)?;
        let basis: BTreeSet<Monomial> = self.q_list(v).into_iter().collect();
        Ok(s.filter(|m| m.is_one() || basis.contains(m)))
    }
}

impl fmt::Display for FCellTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &FCellTree, v: NodeId, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let vx = t.vertex(v);
            let pad = "  ".repeat(depth);
            match &vx.kind {
                VertexKind::Leaf(k) => writeln!(f, "{pad}handle {}", t.alphabet.variable(*k))?,
                VertexKind::Unmarked if v == t.root() => writeln!(f, "{pad}root")?,
                VertexKind::Unmarked => writeln!(f, "{pad}surface")?,
                VertexKind::Marked { link, mu } => {
                    writeln!(f, "{pad}link n={} mu={mu}", link.len())?
                }
            }
            for &c in &vx.children {
                go(t, c, depth + 1, f)?;
            }
            Ok(())
        }
        go(self, self.root(), 0, f)
    }
}

/// Root → pair of pants → two Bing doubles of the core, handles `x1 … x4`.
pub fn fig1_cell() -> FCellTree {
    let b = Arc::new(SolidTorusLink::core().bing_double().expect("bing double"));
    FCellTree::new(TreeSpec::Surface(vec![
        TreeSpec::Link(b.clone(), vec![TreeSpec::named("x1"), TreeSpec::named("x2")]),
        TreeSpec::Link(b, vec![TreeSpec::named("x3"), TreeSpec::named("x4")]),
    ]))
    .expect("fig1 tree")
}

/// The height-two cell: an annulus carrying a Bing double whose first
/// component bounds a pair of pants with two further Bing doubles, the second
/// component being the handle `x5`.
pub fn fig2_cell() -> FCellTree {
    let b = Arc::new(SolidTorusLink::core().bing_double().expect("bing double"));
    let pants = TreeSpec::Surface(vec![
        TreeSpec::Link(b.clone(), vec![TreeSpec::named("x1"), TreeSpec::named("x2")]),
        TreeSpec::Link(b.clone(), vec![TreeSpec::named("x3"), TreeSpec::named("x4")]),
    ]);
    FCellTree::new(TreeSpec::Surface(vec![TreeSpec::Link(
        b,
        vec![pants, TreeSpec::named("x5")],
    )]))
    .expect("fig2 tree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monos(t: &FCellTree, texts: &[&str]) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = texts
            .iter()
            .map(|s| Monomial::parse(t.alphabet(), s).unwrap())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn heights() {
        assert_eq!(FCellTree::single_handle().height(), 0);
        assert_eq!(fig1_cell().height(), 1);
        assert_eq!(fig2_cell().height(), 2);
        assert_eq!(fig2_cell().num_leaves(), 5);
    }

    #[test]
    fn fig2_intersections() {
        let t = fig2_cell();
        let pairs: Vec<(usize, usize)> = (0..5)
            .tuple_combinations()
            .filter(|&(a, b)| t.may_intersect(a, b).unwrap())
            .collect();
        assert_eq!(pairs, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(!t.may_intersect(0, 1).unwrap());
        assert!(!t.may_intersect(0, 4).unwrap());
    }

    #[test]
    fn fig2_bases() {
        let t = fig2_cell();
        assert_eq!(
            t.q_basis(t.root()).monomials,
            monos(&t, &["x1.x2.x5", "x3.x4.x5"])
        );
        let r = t.rtilde_basis(t.root()).monomials;
        assert_eq!(
            r,
            monos(
                &t,
                &[
                    "x1.x2.x5", "x2.x1.x5", "x5.x1.x2", "x5.x2.x1", "x3.x4.x5", "x4.x3.x5",
                    "x5.x3.x4", "x5.x4.x3"
                ]
            )
        );
        assert!(!r.contains(&Monomial::parse(t.alphabet(), "x1.x5.x2").unwrap()));
    }

    #[test]
    fn fig1_q_basis() {
        let t = fig1_cell();
        assert_eq!(t.q_basis(t.root()).monomials, monos(&t, &["x1.x2", "x3.x4"]));
        let s = FCellTree::single_handle();
        assert_eq!(s.rtilde_basis(s.root()).monomials, vec![Monomial::var(0)]);
    }

    #[test]
    fn projection_and_membership() {
        let t = fig2_cell();
        let ring = t.full_ring();
        let m = |s: &str| Monomial::parse(t.alphabet(), s).unwrap();
        let s = TruncatedSeries::from_terms(
            &ring,
            [(Monomial::one(), 1), (m("x1.x2.x5"), 3), (m("x2.x1.x5"), 2)],
        );
        assert!(t.s_membership(&s, t.root()).unwrap().is_member());
        let p = t.p2(&t.p1(&s, t.root()).unwrap(), t.root()).unwrap();
        assert_eq!(p.to_string(), "1 + 3 * x1.x2.x5");
        let bad = TruncatedSeries::from_terms(&ring, [(Monomial::one(), 1), (m("x1"), 1)]);
        assert_eq!(
            t.s_membership(&bad, t.root()).unwrap(),
            Membership::Offending(m("x1"))
        );
        assert!(matches!(t.p1(&bad, t.root()), Err(Error::NotInSubring(_))));
        assert!(!ring.admits(&m("x1.x3")));
        assert!(ring.admits(&m("x1.x2.x5")));
    }

    #[test]
    fn uniformize_keeps_q_basis() {
        let b = Arc::new(SolidTorusLink::core().bing_double().unwrap());
        let t = FCellTree::new(TreeSpec::Surface(vec![
            TreeSpec::Link(b, vec![TreeSpec::handle(), TreeSpec::handle()]),
            TreeSpec::handle(),
        ]))
        .unwrap();
        let u = t.uniformize().unwrap();
        assert_eq!(u.height(), t.height());
        assert_eq!(
            u.q_basis(u.root()).monomials,
            t.q_basis(t.root()).monomials
        );
        for &l in u.leaves() {
            assert_eq!(u.marked_on_path(l), 1);
        }
        let f = fig2_cell().uniformize().unwrap();
        for &l in f.leaves() {
            assert_eq!(f.marked_on_path(l), 2);
        }
    }

    #[test]
    fn invalid_trees_rejected() {
        assert!(FCellTree::new(TreeSpec::handle()).is_err());
        let b = Arc::new(SolidTorusLink::core().bing_double().unwrap());
        assert!(FCellTree::new(TreeSpec::Surface(vec![TreeSpec::Link(
            b,
            vec![TreeSpec::handle()]
        )]))
        .is_err());
        assert!(FCellTree::new(TreeSpec::Surface(vec![
            TreeSpec::named("x1"),
            TreeSpec::named("x1")
        ]))
        .is_err());
    }
}
