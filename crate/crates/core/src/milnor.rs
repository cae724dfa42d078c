//! Links given by longitude words, their Milnor invariants and the
//! homotopy-triviality tests built on them.
//!
//! Component and multiindex positions are 0-based in the API; rendering helpers
//! print them 1-based.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{magnus_expand_in, Monomial, SeriesRing, TruncatedSeries};
use crate::word::{Alphabet, Homomorphism, Word};

/// An `n`-component link presented by untwisted longitude words in the
/// meridian generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinkPresentation {
    meridians: Alphabet,
    longitudes: Vec<Word>,
}

impl LinkPresentation {
    pub fn new(meridians: Alphabet, longitudes: Vec<Word>) -> Result<Self> {
        if meridians.is_empty() {
            return Err(Error::InvalidLink("a link needs at least one component".into()));
        }
        if longitudes.len() != meridians.len() {
            return Err(Error::InvalidLink(format!(
                "{} meridians but {} longitudes",
                meridians.len(),
                longitudes.len()
            )));
        }
        for (j, w) in longitudes.iter().enumerate() {
            if w.alphabet() != &meridians {
                return Err(Error::AlphabetMismatch(format!(
                    "longitude {} is over {}, expected {}",
                    j + 1,
                    w.alphabet(),
                    meridians
                )));
            }
            if w.exponent_sum(j) != 0 {
                return Err(Error::InvalidLink(format!(
                    "longitude {} has nonzero exponent sum in its own meridian {}",
                    j + 1,
                    meridians.name(j)
                )));
            }
        }
        Ok(LinkPresentation {
            meridians,
            longitudes,
        })
    }

    /// Longitudes in the textual grammar over `m1, …, mn`.
    pub fn from_text<S: AsRef<str>>(longitudes: &[S]) -> Result<Self> {
        let a = Alphabet::numbered("m", longitudes.len());
        Self::with_meridians(a, longitudes)
    }

    pub fn with_meridians<S: AsRef<str>>(meridians: Alphabet, longitudes: &[S]) -> Result<Self> {
        let words = longitudes
            .iter()
            .map(|t| Word::parse(&meridians, t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(meridians, words)
    }

    pub fn unlink(n: usize) -> Self {
        let a = Alphabet::numbered("m", n);
        let ws = (0..n).map(|_| Word::identity(&a)).collect();
        Self::new(a, ws).expect("unlink is valid")
    }

    pub fn len(&self) -> usize {
        self.longitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.longitudes.is_empty()
    }

    pub fn meridians(&self) -> &Alphabet {
        &self.meridians
    }

    pub fn longitude(&self, j: usize) -> &Word {
        &self.longitudes[j]
    }

    pub fn longitudes(&self) -> &[Word] {
        &self.longitudes
    }

    /// The sublink on the listed components, in the listed order. Meridians of
    /// dropped components are erased from the remaining longitudes.
    pub fn sublink(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() || keep.iter().any(|&i| i >= self.len()) || !keep.iter().all_unique() {
            return Err(Error::InvalidIndex(format!("bad component selection {keep:?}")));
        }
        let names: Vec<String> = keep.iter().map(|&i| self.meridians.name(i).to_string()).collect();
        let vars: Vec<String> = keep
            .iter()
            .map(|&i| self.meridians.variable(i).to_string())
            .collect();
        let target = Alphabet::with_variables(names, vars)?;
        let mut h = Homomorphism::by_name(&self.meridians, &target);
        for i in 0..self.len() {
            if !keep.contains(&i) {
                h.set_index(i, Word::identity(&target))?;
            }
        }
        let ws = keep
            .iter()
            .map(|&i| h.apply(&self.longitudes[i]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(target, ws)
    }

    pub fn delete_component(&self, i: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..self.len()).filter(|&k| k != i).collect();
        self.sublink(&keep)
    }

    fn expansions(&self, ring: &SeriesRing) -> Result<Vec<TruncatedSeries>> {
        self.longitudes
            .iter()
            .map(|w| magnus_expand_in(w, ring))
            .collect()
    }
}

/// `μ̄` as a residue class. A zero modulus means the value is an integer.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MuResidue {
    #[serde(with = "bigint_string")]
    pub value: BigInt,
    #[serde(with = "bigint_string")]
    pub modulus: BigInt,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(v) {
            Ok(i) => i.serialize(s),
            Err(_) => v.to_string().serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(i) => Ok(BigInt::from(i)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl MuResidue {
    pub fn new(value: BigInt, modulus: BigInt) -> Self {
        let modulus = modulus.abs();
        let value = if modulus.is_zero() {
            value
        } else {
            value.mod_floor(&modulus)
        };
        MuResidue { value, modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for MuResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// `(i1,…,ik;j)` with 1-based entries.
pub fn render_index(index: &[usize], j: usize) -> String {
    format!(
        "({};{})",
        index.iter().map(|i| (i + 1).to_string()).join(","),
        j + 1
    )
}

/// Concatenated 1-based digits, `123` for `(1,2;3)`. Entries above 9 are
/// separated by commas.
pub fn render_compact(full: &[usize]) -> String {
    if full.iter().all(|&i| i < 9) {
        full.iter().map(|i| (i + 1).to_string()).collect()
    } else {
        full.iter().map(|i| (i + 1).to_string()).join(",")
    }
}

fn check_index(l: &LinkPresentation, full: &[usize], q: usize) -> Result<()> {
    if q < 1 {
        return Err(Error::ZeroDegree);
    }
    if let Some(&bad) = full.iter().find(|&&i| i >= l.len()) {
        return Err(Error::InvalidIndex(format!(
            "component {} out of range 1..={}",
            bad + 1,
            l.len()
        )));
    }
    if full.len() - 1 > q {
        return Err(Error::DegreeExceeded {
            degree: full.len() - 1,
            q,
        });
    }
    Ok(())
}

/// Coefficient of `x_I` in the Magnus expansion of the `j`-th longitude.
pub fn mu(l: &LinkPresentation, index: &[usize], j: usize, q: usize) -> Result<BigInt> {
    let mut full = index.to_vec();
    full.push(j);
    check_index(l, &full, q)?;
    let ring = SeriesRing::free(l.meridians(), q)?;
    let s = magnus_expand_in(l.longitude(j), &ring)?;
    Ok(s.coefficient(&Monomial::new(index.iter().copied())))
}

/// Every index obtained from `full` by deleting at least one entry and
/// rotating cyclically, of length between 2 and `full.len() - 1`.
pub fn sub_indices(full: &[usize]) -> Vec<Vec<usize>> {
    let k = full.len();
    let mut out = Vec::new();
    for s in 2..k {
        for keep in (0..k).combinations(s) {
            let sub: Vec<usize> = keep.iter().map(|&p| full[p]).collect();
            for r in 0..s {
                let mut rot = sub.clone();
                rot.rotate_left(r);
                out.push(rot);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn delta_with<F: FnMut(&[usize]) -> BigInt>(full: &[usize], mut coeff: F) -> BigInt {
    sub_indices(full)
        .iter()
        .fold(BigInt::zero(), |g, sub| g.gcd(&coeff(sub)))
}

fn coefficient_lookup(expansions: &[TruncatedSeries]) -> impl FnMut(&[usize]) -> BigInt + '_ {
    move |full: &[usize]| {
        let (j, index) = full.split_last().expect("nonempty index");
        expansions[*j].coefficient(&Monomial::new(index.iter().copied()))
    }
}

/// The indeterminacy `Δ(I)` of a full index `I = (i1,…,ik,j)`.
pub fn delta(l: &LinkPresentation, full: &[usize], q: usize) -> Result<BigInt> {
    if full.is_empty() {
        return Err(Error::InvalidIndex("empty multiindex".into()));
    }
    check_index(l, full, q.max(full.len().saturating_sub(1)))?;
    let ring = SeriesRing::free(l.meridians(), q.max(1))?;
    let ex = l.expansions(&ring)?;
    Ok(delta_with(full, coefficient_lookup(&ex)))
}

/// `μ̄(I;j)`: `μ(I;j)` reduced modulo `Δ(I j)`.
pub fn mu_bar(l: &LinkPresentation, index: &[usize], j: usize, q: usize) -> Result<MuResidue> {
    let mut full = index.to_vec();
    full.push(j);
    check_index(l, &full, q)?;
    let ring = SeriesRing::free(l.meridians(), q)?;
    let ex = l.expansions(&ring)?;
    let mut lookup = coefficient_lookup(&ex);
    let value = lookup(&full);
    let modulus = delta_with(&full, lookup);
    Ok(MuResidue::new(value, modulus))
}

/// Longitude expansions cached for repeated `μ̄` queries on one link.
pub struct MuTable {
    n: usize,
    q: usize,
    expansions: Vec<TruncatedSeries>,
}

impl MuTable {
    pub fn new(l: &LinkPresentation, q: usize) -> Result<Self> {
        let ring = SeriesRing::free(l.meridians(), q)?;
        Ok(MuTable {
            n: l.len(),
            q,
            expansions: l.expansions(&ring)?,
        })
    }

    /// Only answers queries on non-repeating indices, which is much cheaper.
    pub fn non_repeating(l: &LinkPresentation, q: usize) -> Result<Self> {
        let ring = SeriesRing::non_repeating(l.meridians(), q)?;
        Ok(MuTable {
            n: l.len(),
            q,
            expansions: l.expansions(&ring)?,
        })
    }

    fn check(&self, full: &[usize]) -> Result<()> {
        if full.is_empty() {
            return Err(Error::InvalidIndex("empty multiindex".into()));
        }
        if full.iter().any(|&i| i >= self.n) {
            return Err(Error::InvalidIndex(format!("{full:?} out of range")));
        }
        if full.len() - 1 > self.q {
            return Err(Error::DegreeExceeded {
                degree: full.len() - 1,
                q: self.q,
            });
        }
        Ok(())
    }

    pub fn mu(&self, full: &[usize]) -> Result<BigInt> {
        self.check(full)?;
        Ok(coefficient_lookup(&self.expansions)(full))
    }

    pub fn mu_bar(&self, full: &[usize]) -> Result<MuResidue> {
        self.check(full)?;
        let mut lookup = coefficient_lookup(&self.expansions);
        let value = lookup(full);
        Ok(MuResidue::new(value, delta_with(full, lookup)))
    }
}

/// A non-repeating index whose `μ̄` is nonzero.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Witness {
    pub index: Vec<usize>,
    pub component: usize,
    pub mu_bar: MuResidue,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mu_bar = {}",
            render_index(&self.index, self.component),
            self.mu_bar
        )
    }
}

/// Non-repeating full indices in search order: by length, then by last
/// entry, then lexicographically.
fn non_repeating_indices(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (2..=n).flat_map(move |s| {
        (0..n).flat_map(move |j| {
            let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            others.into_iter().permutations(s - 1).map(move |mut p| {
                p.push(j);
                p
            })
        })
    })
}

/// Checks that every non-repeating `μ̄` vanishes. Returns the first
/// offending index otherwise.
pub fn homotopy_witness(l: &LinkPresentation, q: usize) -> Result<Option<Witness>> {
    let n = l.len();
    if q < n + 1 {
        return Err(Error::DegreeTooSmall { q, needed: n + 1 });
    }
    let ring = SeriesRing::non_repeating(l.meridians(), q)?;
    let ex = l.expansions(&ring)?;
    let mut lookup = coefficient_lookup(&ex);
    for full in non_repeating_indices(n) {
        let value = lookup(&full);
        if value.is_zero() {
            continue;
        }
        let modulus = delta_with(&full, &mut lookup);
        let r = MuResidue::new(value, modulus);
        if !r.is_zero() {
            let (j, index) = full.split_last().expect("nonempty");
            return Ok(Some(Witness {
                index: index.to_vec(),
                component: *j,
                mu_bar: r,
            }));
        }
    }
    Ok(None)
}

pub fn is_homotopically_trivial(l: &LinkPresentation, q: usize) -> Result<bool> {
    homotopy_witness(l, q).map(|w| w.is_none())
}

/// Every sublink with one component removed is homotopically trivial.
pub fn is_almost_trivial(l: &LinkPresentation, q: usize) -> Result<bool> {
    let n = l.len();
    if q < n + 1 {
        return Err(Error::DegreeTooSmall { q, needed: n + 1 });
    }
    if n == 1 {
        return Ok(true);
    }
    for i in 0..n {
        if !is_homotopically_trivial(&l.delete_component(i)?, q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators, relators and nilpotency class of the Milnor-type presentation
/// `⟨m_1,…,m_n | [m_j, w_j] (j < n), F_q⟩`. The class relators are implicit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub class: usize,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "< {} | {}{}F_{} >",
            self.generators.join(", "),
            self.relators.iter().map(|r| r.to_string()).join(", "),
            if self.relators.is_empty() { "" } else { ", " },
            self.class
        )
    }
}

pub fn nilpotent_presentation(l: &LinkPresentation, q: usize) -> Result<Presentation> {
    if q < 1 {
        return Err(Error::ZeroDegree);
    }
    let a = l.meridians();
    let relators = (0..l.len() - 1)
        .map(|j| Word::generator(a, j).commutator(l.longitude(j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Presentation {
        generators: a.names().to_vec(),
        relators,
        class: q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> LinkPresentation {
        LinkPresentation::from_text(&["m2", "m1"]).unwrap()
    }

    fn borromean() -> LinkPresentation {
        LinkPresentation::from_text(&[
            "m2^-1 m3^-1 m2 m3",
            "m3^-1 m1^-1 m3 m1",
            "m1^-1 m2^-1 m1 m2",
        ])
        .unwrap()
    }

    #[test]
    fn linking_numbers() {
        assert_eq!(mu(&hopf(), &[1], 0, 2).unwrap(), BigInt::from(1));
        assert_eq!(mu(&borromean(), &[0, 1], 2, 3).unwrap(), BigInt::from(1));
        assert_eq!(mu(&borromean(), &[1, 0], 2, 3).unwrap(), BigInt::from(-1));
        assert!(matches!(
            mu(&hopf(), &[0, 1, 0], 1, 2),
            Err(Error::DegreeExceeded { .. })
        ));
    }

    #[test]
    fn delta_conventions() {
        assert_eq!(delta(&hopf(), &[1, 0], 3).unwrap(), BigInt::zero());
        assert_eq!(delta(&borromean(), &[0, 1, 2], 4).unwrap(), BigInt::zero());
        let l = LinkPresentation::from_text(&["m2 m2 m3 m3 m3 m3", "m1 m1", "m1 m1 m1 m1"]).unwrap();
        assert_eq!(delta(&l, &[0, 1, 2], 4).unwrap(), BigInt::from(2));
    }

    #[test]
    fn residues() {
        let r = mu_bar(&borromean(), &[0, 1], 2, 4).unwrap();
        assert_eq!(r, MuResidue::new(1.into(), 0.into()));
        assert_eq!(r.to_string(), "1 (mod 0)");
        assert_eq!(MuResidue::new((-3).into(), 2.into()).value, BigInt::from(1));
        assert!(mu_bar(&LinkPresentation::unlink(3), &[0, 1], 2, 4).unwrap().is_zero());
    }

    #[test]
    fn triviality_and_witnesses() {
        assert!(is_homotopically_trivial(&LinkPresentation::unlink(4), 5).unwrap());
        let w = homotopy_witness(&hopf(), 3).unwrap().unwrap();
        assert_eq!((w.index.clone(), w.component), (vec![1], 0));
        let w = homotopy_witness(&borromean(), 4).unwrap().unwrap();
        assert_eq!(w.index.len(), 2);
        assert_eq!(w.mu_bar.modulus, BigInt::zero());
        assert!(matches!(
            is_homotopically_trivial(&borromean(), 3),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn almost_triviality() {
        assert!(is_almost_trivial(&borromean(), 4).unwrap());
        assert!(is_almost_trivial(&LinkPresentation::unlink(3), 4).unwrap());
        let l = LinkPresentation::from_text(&["m2", "m1", "1"]).unwrap();
        assert!(!is_almost_trivial(&l, 4).unwrap());
    }

    #[test]
    fn sublinks_erase_meridians() {
        let s = borromean().delete_component(2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.longitudes().iter().all(Word::is_identity));
        assert_eq!(s.meridians().names(), &["m1".to_string(), "m2".to_string()]);
    }

    #[test]
    fn twisted_longitude_rejected() {
        assert!(LinkPresentation::from_text(&["m1", "1"]).is_err());
    }

    #[test]
    fn presentations() {
        let p = nilpotent_presentation(&hopf(), 3).unwrap();
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.relators[0].to_string(), "m1^-1 m2^-1 m1 m2");
        let p = nilpotent_presentation(&LinkPresentation::unlink(3), 4).unwrap();
        assert!(p.relators.iter().all(Word::is_identity));
    }

    #[test]
    fn sub_index_enumeration() {
        let subs = sub_indices(&[0, 1, 2]);
        assert_eq!(subs.len(), 6);
        assert!(sub_indices(&[0, 1]).is_empty());
    }
}
