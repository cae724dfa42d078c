//! Links in the solid torus, admissibility, Bing doubling and composition.
//!
//! A solid-torus link on `n` components uses three alphabets:
//!
//! * the wedge word lives over `z1, …, zn, y`, where `y` is the meridian of
//!   the complementary core `∧′`;
//! * `lhat` is `L ∪ ∧` over `z1, …, zn, a`, with `a` the meridian of `∧`;
//! * `lplus` is `L ∪ ∧ ∪ ∧′` over `z1, …, zn, a, y`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::milnor::{homotopy_witness, LinkPresentation, Witness};
use crate::series::{magnus_expand, Monomial};
use crate::word::{Alphabet, Homomorphism, Word};

pub fn wedge_alphabet(n: usize) -> Alphabet {
    Alphabet::new((1..=n).map(|i| format!("z{i}")).chain(["y".to_string()]))
        .expect("valid names")
}

pub fn lhat_alphabet(n: usize) -> Alphabet {
    Alphabet::new((1..=n).map(|i| format!("z{i}")).chain(["a".to_string()]))
        .expect("valid names")
}

pub fn lplus_alphabet(n: usize) -> Alphabet {
    Alphabet::new(
        (1..=n)
            .map(|i| format!("z{i}"))
            .chain(["a".to_string(), "y".to_string()]),
    )
    .expect("valid names")
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolidTorusLink {
    wedge_word: Word,
    lhat: LinkPresentation,
    lplus: LinkPresentation,
    preferred_order: Vec<usize>,
}

/// Which parts of the admissibility definition hold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibilityReport {
    /// `L ∪ ∧` is not homotopically trivial; carries its witness.
    pub essential: Option<Witness>,
    /// Components `i` of `L` for which `L ∪ ∧ ∪ ∧′` minus `i` is nontrivial.
    pub nontrivial_deletions: Vec<usize>,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.essential.is_some() && self.nontrivial_deletions.is_empty()
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.essential {
            Some(w) => writeln!(f, "essential: yes, witness {w}")?,
            None => writeln!(f, "essential: no")?,
        }
        if self.nontrivial_deletions.is_empty() {
            write!(f, "deletions trivial: yes")
        } else {
            write!(
                f,
                "deletions trivial: no, components {:?} stay linked",
                self.nontrivial_deletions
                    .iter()
                    .map(|i| i + 1)
                    .collect::<Vec<_>>()
            )
        }
    }
}

/// Degree used by the admissibility checks for `n` components.
pub fn admissibility_degree(n: usize) -> usize {
    n + 2
}

impl SolidTorusLink {
    /// Checks consistency of the component counts and alphabets. Admissibility
    /// is a separate question, see [`SolidTorusLink::admissibility`].
    pub fn new(
        wedge_word: Word,
        lhat: LinkPresentation,
        lplus: LinkPresentation,
        preferred_order: Vec<usize>,
    ) -> Result<Self> {
        let n = preferred_order.len();
        if n == 0 {
            return Err(Error::InvalidLink("solid torus link with no components".into()));
        }
        let mut sorted = preferred_order.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidLink(format!(
                "preferred order {:?} is not a permutation of 1..={n}",
                preferred_order.iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
        if wedge_word.alphabet() != &wedge_alphabet(n) {
            return Err(Error::InvalidLink(format!(
                "wedge word must be over {}",
                wedge_alphabet(n)
            )));
        }
        if lhat.meridians() != &lhat_alphabet(n) {
            return Err(Error::InvalidLink(format!(
                "lhat must have {} components over {}",
                n + 1,
                lhat_alphabet(n)
            )));
        }
        if lplus.meridians() != &lplus_alphabet(n) {
            return Err(Error::InvalidLink(format!(
                "lplus must have {} components over {}",
                n + 2,
                lplus_alphabet(n)
            )));
        }
        Ok(SolidTorusLink {
            wedge_word,
            lhat,
            lplus,
            preferred_order,
        })
    }

    /// Builds from text with the standard alphabets; `preferred_order` is 0-based.
    pub fn from_text<S: AsRef<str>>(
        wedge: &str,
        lhat: &[S],
        lplus: &[S],
        preferred_order: Vec<usize>,
    ) -> Result<Self> {
        let n = preferred_order.len();
        let w = Word::parse(&wedge_alphabet(n), wedge)?;
        let lh = LinkPresentation::with_meridians(lhat_alphabet(n), lhat)?;
        let lp = LinkPresentation::with_meridians(lplus_alphabet(n), lplus)?;
        Self::new(w, lh, lp, preferred_order)
    }

    pub fn len(&self) -> usize {
        self.preferred_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preferred_order.is_empty()
    }

    pub fn wedge_word(&self) -> &Word {
        &self.wedge_word
    }

    pub fn lhat(&self) -> &LinkPresentation {
        &self.lhat
    }

    pub fn lplus(&self) -> &LinkPresentation {
        &self.lplus
    }

    pub fn preferred_order(&self) -> &[usize] {
        &self.preferred_order
    }

    pub fn admissibility(&self, q: usize) -> Result<AdmissibilityReport> {
        let n = self.len();
        if q < admissibility_degree(n) {
            return Err(Error::DegreeTooSmall {
                q,
                needed: admissibility_degree(n),
            });
        }
        let essential = homotopy_witness(&self.lhat, q)?;
        let mut bad = Vec::new();
        for i in 0..n {
            let sub = self.lplus.delete_component(i)?;
            if homotopy_witness(&sub, q)?.is_some() {
                bad.push(i);
            }
        }
        Ok(AdmissibilityReport {
            essential,
            nontrivial_deletions: bad,
        })
    }

    pub fn is_admissible(&self, q: usize) -> Result<bool> {
        Ok(self.admissibility(q)?.admissible())
    }

    /// Fails with [`Error::NotAdmissible`] unless admissible at the default degree.
    pub fn ensure_admissible(&self) -> Result<()> {
        let report = self.admissibility(admissibility_degree(self.len()))?;
        if report.admissible() {
            Ok(())
        } else {
            Err(Error::NotAdmissible(report.to_string()))
        }
    }

    /// Coefficient of `z_{σ(1)}⋯z_{σ(n)}` in the expansion of the wedge word.
    pub fn wedge_mu(&self) -> Result<BigInt> {
        let n = self.len();
        let s = magnus_expand(&self.wedge_word, n)?;
        let c = s.coefficient(&Monomial::new(self.preferred_order.iter().copied()));
        if c.is_zero() {
            Err(Error::InvalidPreferredOrder)
        } else {
            Ok(c)
        }
    }

    /// The core of the solid torus.
    pub fn core() -> Self {
        Self::from_text("z1", &["a", "z1"], &["a y", "z1", "z1"], vec![0])
            .expect("core template")
    }

    /// Replaces component `i` by two clasped parallel copies. The clasp is
    /// repeated `power` times (negative powers reverse it), which multiplies
    /// the wedge coefficient by `power`.
    pub fn double_component(&self, i: usize, power: i64) -> Result<Self> {
        let n = self.len();
        if i >= n {
            return Err(Error::InvalidIndex(format!("component {} of {n}", i + 1)));
        }
        if power == 0 {
            return Err(Error::InvalidLink("clasp power must be nonzero".into()));
        }
        let m = n + 1;
        let new_index = |k: usize| if k <= i { k } else { k + 1 };

        let double = |old: &Alphabet, new: &Alphabet| -> Result<Homomorphism> {
            let mut h = Homomorphism::new(old, new);
            for k in 0..old.len() {
                let name = old.name(k);
                let img = if k < n {
                    if k == i {
                        Word::generator(new, i)
                            .commutator(&Word::generator(new, i + 1))?
                            .pow(power)
                    } else {
                        Word::generator(new, new_index(k))
                    }
                } else {
                    Word::named(new, name)?
                };
                h.set_index(k, img)?;
            }
            Ok(h)
        };

        let map_link = |old: &LinkPresentation, new_alpha: Alphabet| -> Result<LinkPresentation> {
            let h = double(old.meridians(), &new_alpha)?;
            let mut ws = vec![Word::identity(&new_alpha); new_alpha.len()];
            for k in 0..old.len() {
                let img = h.apply(old.longitude(k))?;
                if k == i {
                    let z1 = Word::generator(&new_alpha, i);
                    let z2 = Word::generator(&new_alpha, i + 1);
                    ws[i] = z2.commutator(&img)?.pow(power);
                    ws[i + 1] = img.commutator(&z1)?.pow(power);
                } else {
                    ws[if k < n { new_index(k) } else { k + 1 }] = img;
                }
            }
            LinkPresentation::new(new_alpha, ws)
        };

        let wedge = double(self.wedge_word.alphabet(), &wedge_alphabet(m))?
            .apply(&self.wedge_word)?;
        let lhat = map_link(&self.lhat, lhat_alphabet(m))?;
        let lplus = map_link(&self.lplus, lplus_alphabet(m))?;
        let mut order = Vec::with_capacity(m);
        for &k in &self.preferred_order {
            if k == i {
                order.push(i);
                order.push(i + 1);
            } else {
                order.push(new_index(k));
            }
        }
        let out = Self::new(wedge, lhat, lplus, order)?;
        out.ensure_admissible()?;
        out.wedge_mu()?;
        Ok(out)
    }

    /// Doubles every component with clasp power `power`.
    pub fn bing_double_power(&self, power: i64) -> Result<Self> {
        let mut t = self.clone();
        for i in (0..self.len()).rev() {
            t = t.double_component(i, power)?;
        }
        Ok(t)
    }

    pub fn bing_double(&self) -> Result<Self> {
        self.bing_double_power(1)
    }

    /// The core doubled `depth` times.
    pub fn iterated_bing(depth: usize) -> Result<Self> {
        let mut t = Self::core();
        for _ in 0..depth {
            t = t.bing_double()?;
        }
        Ok(t)
    }
}

/// Replaces the last component of `l` by the pattern `pattern`.
///
/// The result has the first `k` meridians of `l` followed by one new meridian
/// per pattern component, all renamed `m1, …`.
pub fn compose(l: &LinkPresentation, pattern: &SolidTorusLink) -> Result<LinkPresentation> {
    let k = l.len() - 1;
    let m = pattern.len();
    let out = Alphabet::numbered("m", k + m);
    let old = l.meridians();

    // old meridians except the last, with the last erased
    let mut erase_last = Homomorphism::new(old, &out);
    for i in 0..k {
        erase_last.set_index(i, Word::generator(&out, i))?;
    }
    erase_last.set_index(k, Word::identity(&out))?;
    let outer = erase_last.apply(l.longitude(k))?;

    let wedge_alpha = pattern.wedge_word.alphabet();
    let mut into_out = Homomorphism::new(wedge_alpha, &out);
    for j in 0..m {
        into_out.set_index(j, Word::generator(&out, k + j))?;
    }
    into_out.set_index(m, outer.clone())?;
    let wedge = into_out.apply(&pattern.wedge_word)?;

    let mut outer_map = Homomorphism::new(old, &out);
    for i in 0..k {
        outer_map.set_index(i, Word::generator(&out, i))?;
    }
    outer_map.set_index(k, wedge)?;

    let plus_alpha = pattern.lplus.meridians();
    let mut inner_map = Homomorphism::new(plus_alpha, &out);
    for j in 0..m {
        inner_map.set_index(j, Word::generator(&out, k + j))?;
    }
    inner_map.set_index(m, Word::identity(&out))?;
    inner_map.set_index(m + 1, outer)?;

    let mut ws = Vec::with_capacity(k + m);
    for i in 0..k {
        ws.push(outer_map.apply(l.longitude(i))?);
    }
    for j in 0..m {
        ws.push(inner_map.apply(pattern.lplus.longitude(j))?);
    }
    LinkPresentation::new(out, ws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::is_homotopically_trivial;

    #[test]
    fn core_is_admissible() {
        let c = SolidTorusLink::core();
        assert!(c.is_admissible(3).unwrap());
        assert_eq!(c.wedge_mu().unwrap(), BigInt::from(1));
    }

    #[test]
    fn bing_double_of_core() {
        let b = SolidTorusLink::core().bing_double().unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.wedge_word().to_string(), "z1^-1 z2^-1 z1 z2");
        assert_eq!(
            b.lplus().longitude(0).to_string(),
            "z2^-1 y^-1 a^-1 z2 a y"
        );
        assert!(b.is_admissible(4).unwrap());
        assert_eq!(b.wedge_mu().unwrap().magnitude(), &1u32.into());
    }

    #[test]
    fn iterated_doubles() {
        let t = SolidTorusLink::iterated_bing(2).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.is_admissible(6).unwrap());
        assert_eq!(t.wedge_mu().unwrap().magnitude(), &1u32.into());
    }

    #[test]
    fn clasp_powers_scale_mu() {
        for p in [2i64, 3, -1] {
            let b = SolidTorusLink::core().bing_double_power(p).unwrap();
            assert_eq!(b.wedge_mu().unwrap(), BigInt::from(p));
        }
    }

    #[test]
    fn partial_double() {
        let b = SolidTorusLink::core().bing_double().unwrap();
        let t = b.double_component(1, 1).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.preferred_order(), &[0, 1, 2]);
    }

    #[test]
    fn unlinked_pattern_is_not_essential() {
        let t = SolidTorusLink::from_text(
            "1",
            &["1", "1", "1"],
            &["1", "1", "1", "1"],
            vec![0, 1],
        )
        .unwrap();
        let r = t.admissibility(4).unwrap();
        assert!(r.essential.is_none());
        assert!(!r.admissible());
        assert!(matches!(t.wedge_mu(), Err(Error::InvalidPreferredOrder)));
    }

    #[test]
    fn composing_hopf_with_bing_gives_borromean() {
        let hopf = LinkPresentation::from_text(&["m2", "m1"]).unwrap();
        let b = SolidTorusLink::core().bing_double().unwrap();
        let l = compose(&hopf, &b).unwrap();
        let expected = LinkPresentation::from_text(&[
            "m2^-1 m3^-1 m2 m3",
            "m3^-1 m1^-1 m3 m1",
            "m1^-1 m2^-1 m1 m2",
        ])
        .unwrap();
        assert_eq!(l, expected);
        assert!(!is_homotopically_trivial(&l, 4).unwrap());
    }

    #[test]
    fn composing_with_core_keeps_link() {
        let hopf = LinkPresentation::from_text(&["m2", "m1"]).unwrap();
        assert_eq!(compose(&hopf, &SolidTorusLink::core()).unwrap(), hopf);
        let u = LinkPresentation::unlink(2);
        let b = SolidTorusLink::core().bing_double().unwrap();
        assert!(is_homotopically_trivial(&compose(&u, &b).unwrap(), 4).unwrap());
    }
}
