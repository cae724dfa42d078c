//! Degree-truncated noncommutative power series with integer coefficients,
//! and the Magnus expansion of free group words.
//!
//! A [`SeriesRing`] fixes the ordered variable set, the truncation degree `q`
//! and a monomial ideal generated by forbidden variable pairs. Monomials that
//! contain a forbidden pair (as a possibly scattered subsequence) are zero in
//! the ring. The free ring has no forbidden pairs; the non-repeating ring
//! forbids every diagonal pair `(x, x)`; the tree rings of [`crate::tree`] add
//! off-diagonal pairs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

/// Default truncation degree for `n` variables.
pub fn default_degree(num_variables: usize) -> usize {
    num_variables + 1
}

/// A word in the series variables. The empty monomial is the constant `1`.
///
/// Ordered length-lexicographically with respect to the variable order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        Monomial(
            vars.into_iter()
                .map(|v| u16::try_from(v).expect("variable index fits in u16"))
                .collect(),
        )
    }

    pub fn var(v: usize) -> Self {
        Self::new([v])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    pub fn push(&mut self, var: usize) {
        self.0.push(var as u16);
    }

    pub fn has_repeats(&self) -> bool {
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).any(|w| w[0] == w[1])
    }

    /// True when `other` can be obtained from `self` by deleting letters.
    pub fn contains_subsequence(&self, other: &Monomial) -> bool {
        let mut it = self.0.iter();
        other.0.iter().all(|x| it.any(|y| y == x))
    }

    /// `x1.x2.x5` style rendering; the constant monomial renders as `1`.
    pub fn render(&self, vars: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.vars()
            .map(|v| vars.variable(v))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse(vars: &Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Monomial::one());
        }
        text.split('.')
            .enumerate()
            .map(|(pos, tok)| {
                vars.variable_index(tok.trim())
                    .ok_or_else(|| Error::UnknownGenerator {
                        name: tok.to_string(),
                        position: pos,
                    })
            })
            .collect::<Result<Vec<_>>>()
            .map(Monomial::new)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.0)
    }
}

/// Monomial ideal generated by all monomials `x_a x_b` and `x_b x_a` for the
/// forbidden unordered pairs `{a, b}` (including `a = b`), closed under
/// inserting letters anywhere.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairIdeal {
    n: usize,
    forbidden: Vec<bool>,
}

impl PairIdeal {
    pub fn none(n: usize) -> Self {
        PairIdeal {
            n,
            forbidden: vec![false; n * n],
        }
    }

    /// Kills every monomial with a repeated variable.
    pub fn repeats(n: usize) -> Self {
        let mut p = Self::none(n);
        for i in 0..n {
            p.forbid(i, i);
        }
        p
    }

    pub fn forbid(&mut self, a: usize, b: usize) {
        self.forbidden[a * self.n + b] = true;
        self.forbidden[b * self.n + a] = true;
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_forbidden(&self, a: usize, b: usize) -> bool {
        self.forbidden[a * self.n + b]
    }

    pub fn kills(&self, m: &Monomial) -> bool {
        let v = &m.0;
        (0..v.len()).any(|i| (i + 1..v.len()).any(|j| self.is_forbidden(v[i] as usize, v[j] as usize)))
    }

    /// Whether `m · x_var` is killed, assuming `m` itself survives.
    pub fn kills_extension(&self, m: &Monomial, var: usize) -> bool {
        m.vars().any(|u| self.is_forbidden(u, var))
    }

    /// Whether `a · b` is killed, assuming both factors survive.
    pub fn kills_product(&self, a: &Monomial, b: &Monomial) -> bool {
        a.vars().any(|u| b.vars().any(|v| self.is_forbidden(u, v)))
    }
}

#[derive(Debug)]
struct RingInner {
    vars: Alphabet,
    q: usize,
    ideal: PairIdeal,
}

/// Variables, truncation degree and monomial ideal of a truncated series ring.
#[derive(Clone, Debug)]
pub struct SeriesRing(Arc<RingInner>);

impl SeriesRing {
    pub fn with_ideal(vars: &Alphabet, q: usize, ideal: PairIdeal) -> Result<Self> {
        if q < 1 {
            return Err(Error::ZeroDegree);
        }
        if ideal.size() != vars.len() {
            return Err(Error::RingMismatch(
                "ideal size differs from variable count".into(),
            ));
        }
        Ok(SeriesRing(Arc::new(RingInner {
            vars: vars.clone(),
            q,
            ideal,
        })))
    }

    /// `Z{x_1, …, x_n}` truncated above degree `q`.
    pub fn free(vars: &Alphabet, q: usize) -> Result<Self> {
        Self::with_ideal(vars, q, PairIdeal::none(vars.len()))
    }

    /// Quotient by monomials with a repeated variable.
    pub fn non_repeating(vars: &Alphabet, q: usize) -> Result<Self> {
        Self::with_ideal(vars, q, PairIdeal::repeats(vars.len()))
    }

    pub fn vars(&self) -> &Alphabet {
        &self.0.vars
    }

    pub fn degree(&self) -> usize {
        self.0.q
    }

    pub fn ideal(&self) -> &PairIdeal {
        &self.0.ideal
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        m.degree() <= self.0.q && !self.0.ideal.kills(m)
    }

    fn check_same(&self, other: &SeriesRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{} (q={}) vs {} (q={})",
                self.vars(),
                self.degree(),
                other.vars(),
                other.degree()
            )))
        }
    }
}

impl PartialEq for SeriesRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.q == other.0.q
                && self.0.vars == other.0.vars
                && self.0.ideal == other.0.ideal)
    }
}

impl Eq for SeriesRing {}

/// An element of a [`SeriesRing`]: a finite map from surviving monomials to
/// nonzero integers.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: SeriesRing,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(ring: &SeriesRing) -> Self {
        TruncatedSeries {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &SeriesRing) -> Self {
        let mut s = Self::zero(ring);
        s.terms.insert(Monomial::one(), BigInt::one());
        s
    }

    /// The series `x_var`.
    pub fn variable(ring: &SeriesRing, var: usize) -> Self {
        Self::from_terms(ring, [(Monomial::var(var), BigInt::one())])
    }

    /// Builds a series, dropping monomials that vanish in the ring and merging
    /// repeated monomials.
    pub fn from_terms<I, C>(ring: &SeriesRing, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(ring);
        for (m, c) in terms {
            if ring.admits(&m) {
                s.add_term(m, c.into());
            }
        }
        s
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.ring.check_same(&other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> TruncatedSeries {
        if k.is_zero() {
            return Self::zero(&self.ring);
        }
        TruncatedSeries {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * k))
                .collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.ring.check_same(&other.ring)?;
        let q = self.ring.degree();
        let ideal = self.ring.ideal();
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let room = q - ma.degree();
            for (mb, cb) in &other.terms {
                // terms are sorted by degree first
                if mb.degree() > room {
                    break;
                }
                if ideal.kills_product(ma, mb) {
                    continue;
                }
                *acc.entry(ma.concat(mb)).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            terms: acc,
        })
    }

    /// Right multiplication by `1 + x_var` (or its inverse `1 - x + x² - …`).
    pub fn mul_generator(&mut self, var: usize, inverse: bool) {
        let q = self.ring.degree();
        let ideal = self.ring.ideal().clone();
        let mut additions: Vec<(Monomial, BigInt)> = Vec::new();
        for (m, c) in &self.terms {
            let mut mono = m.clone();
            let mut coeff = c.clone();
            while mono.degree() < q && !ideal.kills_extension(&mono, var) {
                mono.push(var);
                if inverse {
                    coeff = -coeff;
                }
                additions.push((mono.clone(), coeff.clone()));
                if !inverse {
                    break;
                }
            }
        }
        for (m, c) in additions {
            self.add_term(m, c);
        }
    }

    /// Reinterprets the series in a ring over the same variables, dropping
    /// every monomial that vanishes there.
    pub fn project(&self, ring: &SeriesRing) -> Result<TruncatedSeries> {
        if self.ring.vars() != ring.vars() {
            return Err(Error::RingMismatch(format!(
                "cannot project from {} to {}",
                self.ring.vars(),
                ring.vars()
            )));
        }
        Ok(TruncatedSeries {
            ring: ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| ring.admits(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter<F: FnMut(&Monomial) -> bool>(&self, mut keep: F) -> TruncatedSeries {
        TruncatedSeries {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of the given degree, as (monomial, coefficient) pairs.
    pub fn degree_part(&self, d: usize) -> Vec<(Monomial, BigInt)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {}", m.render(self.ring.vars()))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(q={}; {self})", self.ring.degree())
    }
}

/// Magnus expansion `m ↦ 1 + x`, `m^-1 ↦ 1 - x + x² - …` in an arbitrary ring
/// over the word's alphabet.
pub fn magnus_expand_in(w: &Word, ring: &SeriesRing) -> Result<TruncatedSeries> {
    if w.alphabet() != ring.vars() {
        return Err(Error::AlphabetMismatch(format!(
            "word over {} expanded in ring over {}",
            w.alphabet(),
            ring.vars()
        )));
    }
    let mut s = TruncatedSeries::one(ring);
    for l in w.letters() {
        s.mul_generator(l.generator, l.inverse);
    }
    Ok(s)
}

/// Magnus expansion in the free ring truncated above degree `q`.
pub fn magnus_expand(w: &Word, q: usize) -> Result<TruncatedSeries> {
    let ring = SeriesRing::free(w.alphabet(), q)?;
    magnus_expand_in(w, &ring)
}

/// Magnus expansion followed by the quotient killing repeated variables.
pub fn reduced_magnus(w: &Word, q: usize) -> Result<TruncatedSeries> {
    let ring = SeriesRing::non_repeating(w.alphabet(), q)?;
    magnus_expand_in(w, &ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::numbered("m", 2)
    }

    #[test]
    fn truncated_inverse() {
        let ring = SeriesRing::free(&ab(), 2).unwrap();
        let x1 = Monomial::var(0);
        let a = TruncatedSeries::from_terms(&ring, [(Monomial::one(), 1), (x1.clone(), 1)]);
        let b = TruncatedSeries::from_terms(
            &ring,
            [
                (Monomial::one(), 1),
                (x1.clone(), -1),
                (Monomial::new([0, 0]), 1),
            ],
        );
        assert!(a.mul(&b).unwrap().is_one());
        assert_eq!(a.mul(&TruncatedSeries::one(&ring)).unwrap(), a);
    }

    #[test]
    fn noncommutative_product() {
        let ring = SeriesRing::free(&ab(), 3).unwrap();
        let x1 = TruncatedSeries::variable(&ring, 0);
        let x2 = TruncatedSeries::variable(&ring, 1);
        let p = x1.mul(&x2).unwrap();
        assert_eq!(p.coefficient(&Monomial::new([0, 1])), BigInt::from(1));
        assert_ne!(p, x2.mul(&x1).unwrap());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let r2 = SeriesRing::free(&ab(), 2).unwrap();
        let r3 = SeriesRing::free(&ab(), 3).unwrap();
        let a = TruncatedSeries::one(&r2);
        let b = TruncatedSeries::one(&r3);
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch(_))));
        assert!(matches!(SeriesRing::free(&ab(), 0), Err(Error::ZeroDegree)));
    }

    #[test]
    fn commutator_expansion_and_rendering() {
        let a = ab();
        let w = Word::parse(&a, "m1^-1 m2^-1 m1 m2").unwrap();
        let s = magnus_expand(&w, 2).unwrap();
        assert_eq!(s.to_string(), "1 + 1 * x1.x2 + -1 * x2.x1");
        assert_eq!(s.coefficient(&Monomial::new([1, 0])), BigInt::from(-1));
        assert_eq!(
            magnus_expand(&Word::identity(&a), 3).unwrap().to_string(),
            "1"
        );
    }

    #[test]
    fn generator_coefficients() {
        let a = ab();
        let s = magnus_expand(&Word::named(&a, "m2").unwrap(), 3).unwrap();
        assert_eq!(s.coefficient(&Monomial::var(1)), BigInt::from(1));
        assert_eq!(s.coefficient(&Monomial::one()), BigInt::from(1));
        assert_eq!(s.coefficient(&Monomial::new([1, 1])), BigInt::zero());
    }

    #[test]
    fn monomial_order_is_length_lex() {
        let mut v = vec![
            Monomial::new([1, 0]),
            Monomial::new([1]),
            Monomial::new([0, 1]),
            Monomial::one(),
            Monomial::new([0]),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Monomial::one(),
                Monomial::new([0]),
                Monomial::new([1]),
                Monomial::new([0, 1]),
                Monomial::new([1, 0]),
            ]
        );
    }

    #[test]
    fn subsequence_containment() {
        let m = Monomial::new([0, 3, 1, 4, 2]);
        assert!(m.contains_subsequence(&Monomial::new([0, 1, 2])));
        assert!(!m.contains_subsequence(&Monomial::new([1, 0])));
        assert!(m.contains_subsequence(&Monomial::one()));
    }

    #[test]
    fn reduced_expansion_drops_repeats() {
        let a = ab();
        let w = Word::parse(&a, "m1 m1").unwrap();
        let s = reduced_magnus(&w, 3).unwrap();
        assert_eq!(s.to_string(), "1 + 2 * x1");
    }

    #[test]
    fn monomial_parse_roundtrip() {
        let a = Alphabet::numbered("m", 5);
        let m = Monomial::parse(&a, "x1.x2.x5").unwrap();
        assert_eq!(m, Monomial::new([0, 1, 4]));
        assert_eq!(m.render(&a), "x1.x2.x5");
        assert!(Monomial::parse(&a, "x9").is_err());
    }
}
