//! Reduced words in finitely generated free groups.
//!
//! Words are stored letter by letter, every letter carrying an exponent of
//! `+1` or `-1`. All constructors return freely reduced words, so structural
//! equality of [`Word`]s is equality in the free group.
//!
//! The textual grammar used throughout the crate is a whitespace separated list
//! of tokens `name` or `name^-1`; the token `1` (or the empty string) is the
//! identity.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
struct AlphabetInner {
    names: Vec<String>,
    variables: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered set of generator names, shared cheaply between words.
///
/// Each generator also carries the name of its Magnus variable; by default
/// `m<k>` gets the variable `x<k>` and every other generator keeps its own name.
#[derive(Clone)]
pub struct Alphabet(Arc<AlphabetInner>);

/// Position of a generator in an [`Alphabet`] together with its name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorId {
    pub name: String,
    pub index: usize,
}

fn default_variable(name: &str) -> String {
    match name.strip_prefix('m') {
        Some(rest) if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit() || c == '_') => {
            format!("x{rest}")
        }
        _ => name.to_string(),
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "1"
        && !name.contains(['^', '.', '*', '+', ',', ';'])
        && !name.chars().any(char::is_whitespace)
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let variables = names.iter().map(|n| default_variable(n)).collect();
        Self::with_variables(names, variables)
    }

    /// Alphabet with explicitly chosen variable names.
    pub fn with_variables(names: Vec<String>, variables: Vec<String>) -> Result<Self> {
        if names.len() != variables.len() {
            return Err(Error::AlphabetMismatch(
                "generator and variable lists differ in length".into(),
            ));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::MalformedToken {
                    token: name.clone(),
                    position: i,
                    reason: "not a valid generator name",
                });
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for v in &variables {
            if !valid_name(v) || !seen.insert(v.as_str()) {
                return Err(Error::DuplicateGenerator(v.clone()));
            }
        }
        Ok(Alphabet(Arc::new(AlphabetInner {
            names,
            variables,
            index,
        })))
    }

    /// `prefix1, …, prefix<n>`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("numbered names are valid")
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn variable(&self, i: usize) -> &str {
        &self.0.variables[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn variables(&self) -> &[String] {
        &self.0.variables
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.index.get(name).copied()
    }

    pub fn variable_index(&self, var: &str) -> Option<usize> {
        self.0.variables.iter().position(|v| v == var)
    }

    pub fn generator(&self, i: usize) -> GeneratorId {
        GeneratorId {
            name: self.name(i).to_string(),
            index: i,
        }
    }

    pub fn ptr_eq(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn check_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!("{self} vs {other}")))
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.0.names == other.0.names && self.0.variables == other.0.variables)
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", self.0.names)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.names.join(", "))
    }
}

/// A generator to the power `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        Letter {
            generator,
            inverse: exponent < 0,
        }
    }

    pub fn exponent(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&letter.inv()) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

impl Word {
    pub fn identity(alphabet: &Alphabet) -> Self {
        Word {
            alphabet: alphabet.clone(),
            letters: Vec::new(),
        }
    }

    /// Single generator `alphabet[i]`.
    pub fn generator(alphabet: &Alphabet, i: usize) -> Self {
        assert!(i < alphabet.len(), "generator index out of range");
        Word {
            alphabet: alphabet.clone(),
            letters: vec![Letter::new(i, 1)],
        }
    }

    pub fn named(alphabet: &Alphabet, name: &str) -> Result<Self> {
        let i = alphabet.index_of(name).ok_or_else(|| Error::UnknownGenerator {
            name: name.to_string(),
            position: 0,
        })?;
        Ok(Self::generator(alphabet, i))
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I>(alphabet: &Alphabet, letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut stack = Vec::new();
        for (pos, l) in letters.into_iter().enumerate() {
            if l.generator >= alphabet.len() {
                return Err(Error::UnknownGenerator {
                    name: format!("#{}", l.generator),
                    position: pos,
                });
            }
            push_reduced(&mut stack, l);
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters: stack,
        })
    }

    /// Parses the textual word grammar.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for (pos, token) in text.split_whitespace().enumerate() {
            if token == "1" {
                continue;
            }
            let (name, inverse) = match token.split_once('^') {
                None => (token, false),
                Some((name, "-1")) => (name, true),
                Some((name, "1")) | Some((name, "+1")) => (name, false),
                Some(_) => {
                    return Err(Error::MalformedToken {
                        token: token.to_string(),
                        position: pos,
                        reason: "exponent must be -1 or 1",
                    })
                }
            };
            let generator = alphabet
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator {
                    name: name.to_string(),
                    position: pos,
                })?;
            letters.push(Letter { generator, inverse });
        }
        Self::reduce(alphabet, letters)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.alphabet.check_same(&other.alphabet)?;
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `h^-1 self h`.
    pub fn conjugate(&self, h: &Word) -> Result<Word> {
        h.inverse().multiply(self)?.multiply(h)
    }

    /// `self^-1 b^-1 self b`.
    pub fn commutator(&self, b: &Word) -> Result<Word> {
        self.inverse()
            .multiply(&b.inverse())?
            .multiply(self)?
            .multiply(b)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(&self.alphabet);
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base).expect("same alphabet");
        }
        out
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator == generator)
            .map(|l| i64::from(l.exponent()))
            .sum()
    }

    /// Image in the free abelian group, one entry per generator.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut v = vec![0; self.alphabet.len()];
        for l in &self.letters {
            v[l.generator] += i64::from(l.exponent());
        }
        v
    }

    /// Generators that occur in the word.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.letters.iter().map(|l| l.generator).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn substitute(&self, map: &Homomorphism) -> Result<Word> {
        map.apply(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.alphabet.name(l.generator))?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// A homomorphism between free groups given by the images of the generators.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Option<(Word, Word)>>,
}

impl Homomorphism {
    /// Homomorphism with no images assigned yet.
    pub fn new(source: &Alphabet, target: &Alphabet) -> Self {
        Homomorphism {
            source: source.clone(),
            target: target.clone(),
            images: vec![None; source.len()],
        }
    }

    /// Sends every source generator to the target generator of the same name,
    /// when there is one.
    pub fn by_name(source: &Alphabet, target: &Alphabet) -> Self {
        let mut h = Self::new(source, target);
        for i in 0..source.len() {
            if let Some(j) = target.index_of(source.name(i)) {
                h.images[i] = Some((
                    Word::generator(target, j),
                    Word::generator(target, j).inverse(),
                ));
            }
        }
        h
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Self::by_name(alphabet, alphabet)
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn set_index(&mut self, generator: usize, image: Word) -> Result<&mut Self> {
        self.target.check_same(image.alphabet())?;
        if generator >= self.source.len() {
            return Err(Error::InvalidIndex(format!("generator #{generator}")));
        }
        let inv = image.inverse();
        self.images[generator] = Some((image, inv));
        Ok(self)
    }

    pub fn set(&mut self, name: &str, image: Word) -> Result<&mut Self> {
        let i = self
            .source
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator {
                name: name.to_string(),
                position: 0,
            })?;
        self.set_index(i, image)
    }

    /// Convenience: image given in the textual grammar over the target alphabet.
    pub fn set_text(&mut self, name: &str, image: &str) -> Result<&mut Self> {
        let w = Word::parse(&self.target, image)?;
        self.set(name, w)
    }

    pub fn image(&self, generator: usize) -> Option<&Word> {
        self.images.get(generator)?.as_ref().map(|(w, _)| w)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.source.check_same(w.alphabet())?;
        let mut letters: Vec<Letter> = Vec::new();
        for l in w.letters() {
            let (img, inv) = self.images[l.generator]
                .as_ref()
                .ok_or_else(|| Error::MissingImage(self.source.name(l.generator).to_string()))?;
            let part = if l.inverse { inv } else { img };
            for &x in part.letters() {
                push_reduced(&mut letters, x);
            }
        }
        Ok(Word {
            alphabet: self.target.clone(),
            letters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::numbered("m", 3)
    }

    fn w(s: &str) -> Word {
        Word::parse(&ab(), s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w("m1 m1^-1").is_identity());
        assert_eq!(w("m1 m2 m2^-1 m1").to_string(), "m1 m1");
        assert_eq!(w("m1 m2 m1^-1").to_string(), "m1 m2 m1^-1");
        assert!(w("").is_identity());
        assert!(w("1").is_identity());
        assert_eq!(w("1").to_string(), "1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Word::parse(&ab(), "m1 q7"),
            Err(Error::UnknownGenerator { position: 1, .. })
        ));
        assert!(matches!(
            Word::parse(&ab(), "m1^2"),
            Err(Error::MalformedToken { .. })
        ));
    }

    #[test]
    fn multiply_and_inverse() {
        let x = w("m1 m2^-1 m3");
        assert_eq!(x.multiply(&w("1")).unwrap(), x);
        assert!(x.multiply(&x.inverse()).unwrap().is_identity());
        assert_eq!(w("m1").multiply(&w("m2")).unwrap().to_string(), "m1 m2");
        assert_eq!(w("m1 m2").inverse().to_string(), "m2^-1 m1^-1");
        assert_eq!(x.inverse().inverse(), x);
        assert!(w("1").inverse().is_identity());
    }

    #[test]
    fn alphabet_mismatch() {
        let other = Alphabet::numbered("z", 3);
        let a = w("m1");
        let b = Word::parse(&other, "z1").unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn commutator_and_conjugate() {
        let x = w("m1 m2");
        assert!(x.commutator(&x).unwrap().is_identity());
        assert_eq!(
            w("m1").commutator(&w("m2")).unwrap().to_string(),
            "m1^-1 m2^-1 m1 m2"
        );
        assert_eq!(w("m1").conjugate(&w("1")).unwrap(), w("m1"));
        assert_eq!(
            w("m1").conjugate(&w("m2")).unwrap().to_string(),
            "m2^-1 m1 m2"
        );
    }

    #[test]
    fn substitution() {
        let src = Alphabet::numbered("m", 2);
        let tgt = Alphabet::new(["a", "b", "c"]).unwrap();
        let mut h = Homomorphism::new(&src, &tgt);
        h.set_text("m1", "a").unwrap().set_text("m2", "b c").unwrap();
        let word = Word::parse(&src, "m1 m2").unwrap();
        assert_eq!(word.substitute(&h).unwrap().to_string(), "a b c");
        let id = Homomorphism::identity(&src);
        assert_eq!(word.substitute(&id).unwrap(), word);

        let partial = Homomorphism::new(&src, &tgt);
        assert!(matches!(
            word.substitute(&partial),
            Err(Error::MissingImage(_))
        ));
    }

    #[test]
    fn default_variables() {
        let a = Alphabet::new(["m1", "z2", "y", "m10"]).unwrap();
        assert_eq!(a.variables(), &["x1", "z2", "y", "x10"]);
        assert!(Alphabet::new(["m1", "m1"]).is_err());
    }

    #[test]
    fn powers_and_abelianization() {
        let x = w("m1 m2^-1");
        assert_eq!(x.pow(2).to_string(), "m1 m2^-1 m1 m2^-1");
        assert_eq!(x.pow(-1), x.inverse());
        assert!(x.pow(0).is_identity());
        assert_eq!(w("m1 m2 m1 m3^-1").abelianization(), vec![2, 1, -1]);
    }
}
