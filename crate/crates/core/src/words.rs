//! Freely reduced words over a generator alphabet.
//!
//! Every group element in this crate is carried around as a [`Word`]. Free
//! groups use the word itself as the element; the other constructions map a
//! word to a canonical representative through their own normal form.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

/// A generator symbol. Two generators are equal iff their ids are equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator(u32);

impl Generator {
    /// Interns `name`, which must match `[a-z][a-z0-9_]*`.
    pub fn new(name: &str) -> Result<Self> {
        if !is_valid_id(name) {
            return Err(Error::InvalidGenerator(name.to_string()));
        }
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Ok(Generator(id));
        }
        let mut table = interner().write().unwrap();
        if let Some(&id) = table.ids.get(name) {
            return Ok(Generator(id));
        }
        let id = table.names.len() as u32;
        let name: Arc<str> = Arc::from(name);
        table.names.push(name.clone());
        table.ids.insert(name, id);
        Ok(Generator(id))
    }

    /// Interning id; stable within a process only.
    pub fn id(self) -> u32 {
        self.0
    }

    pub fn name(&self) -> Arc<str> {
        interner().read().unwrap().names[self.0 as usize].clone()
    }

    pub fn pos(self) -> Letter {
        Letter { gen: self, exp: 1 }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Letter {
        Letter { gen: self, exp: -1 }
    }
}

fn is_valid_id(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z'))
        && bytes.all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A generator raised to `+1` or `-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub exp: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, exp: -self.exp }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp > 0 {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}^-1", self.gen)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last().is_some_and(|&top| top.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let common = self.0.iter().rev().zip(other.0.iter()).take_while(|(a, b)| a.cancels(**b)).count();
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * common);
        out.extend_from_slice(&self.0[..self.len() - common]);
        out.extend_from_slice(&other.0[common..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Writes `self = c v c^-1` with `v` cyclically reduced; returns `(c, v)`.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k].cancels(self.0[n - 1 - k]) {
            k += 1;
        }
        (Word(self.0[..k].to_vec()), Word(self.0[k..n - k].to_vec()))
    }

    /// Returns `(r, k)` with `self = r^k` and `k` maximal.
    pub fn root(&self) -> Result<(Word, usize)> {
        if self.is_empty() {
            return Err(Error::Domain("the identity has no root".into()));
        }
        let (conj, core) = self.cyclic_decomposition();
        let n = core.len();
        let d =
            (1..=n).find(|&d| n % d == 0 && (d..n).all(|i| core.0[i] == core.0[i % d])).expect("d = n always divides");
        let r = conj.mul(&Word(core.0[..d].to_vec())).mul(&conj.inverse());
        Ok((r, n / d))
    }

    /// `<self>` is maximal cyclic iff the root exponent is 1.
    pub fn is_proper_power(&self) -> bool {
        matches!(self.root(), Ok((_, k)) if k > 1)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.0.iter().map(|l| l.gen)
    }

    pub fn exponent_sum(&self) -> i64 {
        self.0.iter().map(|l| l.exp as i64).sum()
    }

    /// Applies the homomorphism `gen -> image(gen)` and reduces.
    pub fn substitute<F: Fn(Generator) -> Option<Word>>(&self, image: F) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = image(l.gen).unwrap_or_else(|| Word::letter(l.gen.pos()));
            out = if l.exp > 0 { out.mul(&img) } else { out.mul(&img.inverse()) };
        }
        out
    }

    /// Splits into maximal runs whose letters satisfy the same side predicate.
    pub fn syllables<F: Fn(Generator) -> bool>(&self, side: F) -> Vec<(bool, Word)> {
        let mut out: Vec<(bool, Word)> = Vec::new();
        for &l in &self.0 {
            let s = side(l.gen);
            match out.last_mut() {
                Some((t, w)) if *t == s => w.0.push(l),
                _ => out.push((s, Word(vec![l]))),
            }
        }
        out
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::reduce(iter)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.exp as i64;
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, e)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// An ordered, duplicate-free list of generators. The order is the canonical
/// tie-breaking order everywhere downstream.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
    index: HashMap<Generator, usize>,
}

impl Alphabet {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, &g) in gens.iter().enumerate() {
            if index.insert(g, i).is_some() {
                return Err(Error::Spec(format!("duplicate generator `{g}`")));
            }
        }
        Ok(Alphabet { gens, index })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let gens = names.iter().map(|n| Generator::new(n.as_ref())).collect::<Result<Vec<_>>>()?;
        Alphabet::new(gens)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn position(&self, g: Generator) -> Option<usize> {
        self.index.get(&g).copied()
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.index.contains_key(&g)
    }

    pub fn get(&self, name: &str) -> Result<Generator> {
        let g = Generator::new(name)?;
        if self.contains(g) {
            Ok(g)
        } else {
            Err(Error::UnknownGenerator(name.to_string()))
        }
    }

    /// The letters `x1, x1^-1, x2, x2^-1, ...` in alphabet order.
    pub fn letters(&self) -> Vec<Letter> {
        self.gens.iter().flat_map(|&g| [g.pos(), g.neg()]).collect()
    }

    pub fn reduce<I: IntoIterator<Item = Letter>>(&self, raw: I) -> Result<Word> {
        let raw: Vec<Letter> = raw.into_iter().collect();
        for l in &raw {
            if !self.contains(l.gen) {
                return Err(Error::AlphabetMismatch(format!("`{}` is not in the alphabet", l.gen)));
            }
        }
        Ok(Word::reduce(raw))
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.generators().find(|g| !self.contains(*g)) {
            Some(g) => Err(Error::AlphabetMismatch(format!("`{g}` is not in the alphabet"))),
            None => Ok(()),
        }
    }

    pub fn subset(&self, gens: &[Generator]) -> Result<Alphabet> {
        for &g in gens {
            if !self.contains(g) {
                return Err(Error::Spec(format!("`{g}` is not a generator")));
            }
        }
        Alphabet::new(self.gens.iter().copied().filter(|g| gens.contains(g)).collect())
    }

    pub fn without(&self, drop: Generator) -> Alphabet {
        Alphabet::new(self.gens.iter().copied().filter(|&g| g != drop).collect())
            .expect("sub-alphabet of a valid alphabet")
    }

    /// Parses the word grammar: whitespace-separated tokens `gen` or
    /// `gen^k`; `1` alone is the identity. The result is freely reduced.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push((s, &text[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push((s, &text[s..]));
        }
        if tokens.len() == 1 && tokens[0].1 == "1" {
            return Ok(Word::identity());
        }
        for (offset, tok) in tokens {
            let (name, exp) = match tok.split_once('^') {
                Some((name, exp)) => {
                    let k: i64 = exp.parse().map_err(|_| Error::Syntax {
                        offset: offset + name.len() + 1,
                        message: format!("bad exponent `{exp}`"),
                    })?;
                    (name, k)
                }
                None => (tok, 1),
            };
            if !is_valid_id(name) {
                return Err(Error::Syntax { offset, message: format!("bad generator token `{name}`") });
            }
            let g = self.get(name)?;
            let l = if exp < 0 { g.neg() } else { g.pos() };
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word::reduce(letters))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_names(&["a", "b"]).unwrap()
    }

    // Repeated single-pair cancellation until a fixpoint.
    fn naive_reduce(mut v: Vec<Letter>) -> Vec<Letter> {
        loop {
            match (0..v.len().saturating_sub(1)).find(|&i| v[i].cancels(v[i + 1])) {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let al = ab();
        let a = al.get("a").unwrap();
        let b = al.get("b").unwrap();
        assert_eq!(al.reduce([a.pos(), a.neg(), b.pos()]).unwrap(), al.parse("b").unwrap());
        assert_eq!(al.reduce([]).unwrap(), Word::identity());
        let raw = vec![a.pos(), b.pos(), b.neg(), a.pos()];
        let expected = Word(naive_reduce(raw.clone()));
        assert_eq!(al.reduce(raw).unwrap(), expected);
        assert_eq!(expected.to_string(), "a^2");
        let z = Generator::new("zz").unwrap();
        assert!(matches!(al.reduce([z.pos()]), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn multiply_and_invert() {
        let al = ab();
        let p = |s| al.parse(s).unwrap();
        assert_eq!(p("a b").mul(&p("b^-1 a")), p("a a"));
        assert_eq!(p("a b").mul(&Word::identity()), p("a b"));
        assert_eq!(p("a").mul(&p("a^-1")), Word::identity());
        assert_eq!(p("a b^-1").inverse(), p("b a^-1"));
        assert_eq!(Word::identity().inverse(), Word::identity());
        let w = p("a a b");
        assert_eq!(w.inverse(), p("b^-1 a^-1 a^-1"));
        assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn commutator_examples() {
        let al = ab();
        let p = |s| al.parse(s).unwrap();
        assert!(p("a").commutator(&p("a")).is_empty());
        assert_eq!(p("a").commutator(&p("b")), p("a^-1 b^-1 a b"));
        // literal concatenation (b^-1 a^-1)(b^-1)(a b)(b), reduced
        let literal = Word::reduce(
            p("b^-1 a^-1")
                .letters()
                .iter()
                .chain(p("b^-1").letters())
                .chain(p("a b").letters())
                .chain(p("b").letters())
                .copied(),
        );
        assert_eq!(p("a b").commutator(&p("b")), literal);
        assert_eq!(literal, p("b^-1 a^-1 b^-1 a b b"));
    }

    #[test]
    fn root_examples() {
        let al = ab();
        let p = |s| al.parse(s).unwrap();
        assert_eq!(p("a b a b").root().unwrap(), (p("a b"), 2));
        assert_eq!(p("a").root().unwrap(), (p("a"), 1));
        assert_eq!(p("b a a b^-1").root().unwrap(), (p("b a b^-1"), 2));
        assert!(Word::identity().root().is_err());
        assert!(p("a b a b").is_proper_power());
        assert!(!p("a b").is_proper_power());
    }

    #[test]
    fn parse_examples() {
        let al = ab();
        let a = al.get("a").unwrap();
        let b = al.get("b").unwrap();
        assert_eq!(al.parse("a b^-1").unwrap(), Word(vec![a.pos(), b.neg()]));
        assert_eq!(al.parse("a^3").unwrap(), Word(vec![a.pos(); 3]));
        assert_eq!(al.parse("a a^-1").unwrap(), Word::identity());
        assert_eq!(al.parse("1").unwrap(), Word::identity());
        assert_eq!(al.parse("  ").unwrap(), Word::identity());
        assert!(matches!(al.parse("a^x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(al.parse("a B"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(al.parse("c"), Err(Error::UnknownGenerator(_))));
        assert_eq!(Word::identity().to_string(), "1");
        assert_eq!(al.parse("b^-2 a a^-1 a").unwrap().to_string(), "b^-2 a");
    }

    #[test]
    fn generator_ids_validated() {
        assert!(Generator::new("ab_3").is_ok());
        assert!(Generator::new("3a").is_err());
        assert!(Generator::new("").is_err());
        assert!(Alphabet::from_names(&["a", "a"]).is_err());
    }
}
