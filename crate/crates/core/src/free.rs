//! Left orders on free groups from the Cayley tree, and relative orders on
//! free-factor coset spaces `F/<Y>`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::{compose, FreeGroup, Group, Membership, OrderedCosetSpace, Sign, SubgroupChainOrder};
use crate::tree::{LinkLocator, PathSums, TreePath};
use crate::words::{Alphabet, Generator, Letter, Word};

/// A total order on the letters `X^{±1}`, which orders every vertex link of
/// the Cayley tree.
#[derive(Clone, Debug)]
pub struct CayleyOrderConfig {
    alphabet: Alphabet,
    base: Vec<Letter>,
    rank: HashMap<Letter, usize>,
}

impl CayleyOrderConfig {
    /// The default base order `x1 < x1^-1 < x2 < x2^-1 < ...`.
    pub fn new(alphabet: Alphabet) -> Self {
        let base = alphabet.letters();
        Self::with_base_order(alphabet, base).expect("default base order is a permutation")
    }

    pub fn with_base_order(alphabet: Alphabet, base: Vec<Letter>) -> Result<Self> {
        let mut rank = HashMap::new();
        for (i, &l) in base.iter().enumerate() {
            if !alphabet.contains(l.gen) {
                return Err(Error::Spec(format!("base order letter `{:?}` not in alphabet", l)));
            }
            if rank.insert(l, i).is_some() {
                return Err(Error::Spec(format!("base order repeats `{:?}`", l)));
            }
        }
        if rank.len() != 2 * alphabet.len() {
            return Err(Error::Spec("base order must list every letter and inverse once".into()));
        }
        Ok(CayleyOrderConfig { alphabet, base, rank })
    }

    /// Parses base order tokens such as `["a", "a^-1", "b", "b^-1"]`.
    pub fn parse_base_order<S: AsRef<str>>(alphabet: Alphabet, tokens: &[S]) -> Result<Self> {
        let mut base = Vec::new();
        for t in tokens {
            let w = alphabet.parse(t.as_ref())?;
            if w.len() != 1 {
                return Err(Error::Spec(format!("base order entry `{}` is not a single letter", t.as_ref())));
            }
            base.push(w.letters()[0]);
        }
        Self::with_base_order(alphabet, base)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn base_order(&self) -> &[Letter] {
        &self.base
    }

    pub fn letter_rank(&self, l: Letter) -> usize {
        self.rank[&l]
    }

    /// Orientation- and turn-sums of the Cayley tree path spelled by `w`
    /// from the identity. The turn at letter `i` compares the incoming link
    /// symbol `x_i^{-e_i}` with the outgoing symbol `x_{i+1}^{e_{i+1}}`.
    pub fn sums(&self, w: &Word) -> PathSums {
        let ls = w.letters();
        let orientation = ls.iter().map(|l| l.exp as i64).sum();
        let turn =
            ls.windows(2).map(|p| Sign::of(self.rank[&p[1]] as i64 - self.rank[&p[0].inverse()] as i64).value()).sum();
        PathSums { orientation, turn }
    }

    pub fn sign(&self, w: &Word) -> Sign {
        self.sums(w).sign()
    }
}

/// `sign(u, <, v)` in the Cayley left order.
pub fn cayley_compare(cfg: &CayleyOrderConfig, u: &Word, v: &Word) -> Result<Sign> {
    cfg.alphabet.check(u)?;
    cfg.alphabet.check(v)?;
    Ok(cfg.sign(&u.inverse().mul(v)))
}

pub fn cayley_order(cfg: &CayleyOrderConfig) -> OrderedCosetSpace {
    let group: Arc<dyn Group> = Arc::new(FreeGroup::new(cfg.alphabet.clone()));
    let cfg = cfg.clone();
    OrderedCosetSpace::from_base_sign(group, Arc::new(|w: &Word| w.is_empty()), move |g| {
        cfg.alphabet.check(g)?;
        Ok(cfg.sign(g))
    })
}

/// Cayley tree edges are `(source, generator)` running `source -> source·x`.
pub type CayleyEdge = (Word, Generator);

/// The reduced Cayley tree path from `u` to `v`.
pub fn cayley_path(u: &Word, v: &Word) -> TreePath<Word, CayleyEdge> {
    let mut path = TreePath::new(u.clone());
    let mut at = u.clone();
    for &l in u.inverse().mul(v).letters() {
        let next = at.mul(&Word::letter(l));
        let source = if l.exp > 0 { at.clone() } else { next.clone() };
        path.push((source, l.gen), l.exp, next.clone());
        at = next;
    }
    path
}

/// Identifies the link of a Cayley tree vertex with `X^{±1}`: the outgoing
/// edge labelled `x` is `x`, the incoming one is `x^-1`. The free action
/// makes every link symbol its own orbit.
pub struct CayleyLinks(pub CayleyOrderConfig);

impl LinkLocator<Word, CayleyEdge> for CayleyLinks {
    fn locate(&self, vertex: &Word, edge: &CayleyEdge) -> Result<(usize, Word)> {
        let (source, x) = edge;
        let symbol = if source == vertex {
            x.pos()
        } else if &source.mul(&Word::letter(x.pos())) == vertex {
            x.neg()
        } else {
            return Err(Error::Domain(format!("edge ({source}, {x}) not incident to {vertex}")));
        };
        Ok((self.0.letter_rank(symbol), Word::identity()))
    }
}

/// The local order for the Cayley tree: one orbit per link symbol, each
/// with a trivial stabilizer.
pub fn cayley_local_order(cfg: &CayleyOrderConfig) -> crate::tree::OrbitLocalOrder<CayleyLinks> {
    let trivial = OrderedCosetSpace::trivial(Arc::new(FreeGroup::new(Alphabet::new(vec![]).unwrap())));
    crate::tree::local_order_from_orbits(CayleyLinks(cfg.clone()), vec![trivial; 2 * cfg.alphabet.len()])
}

/// Data for the order on `F(X)/<Y>`: `A = <Y>` and `B = <X - Y>` are the
/// vertex groups of the splitting `F = A * B`.
#[derive(Clone, Debug)]
pub struct FreeFactorSpec {
    alphabet: Alphabet,
    factor: Vec<Generator>,
    factor_cfg: CayleyOrderConfig,
    complement_cfg: CayleyOrderConfig,
}

impl FreeFactorSpec {
    pub fn new(alphabet: Alphabet, factor: &[Generator]) -> Result<Self> {
        let fa = alphabet.subset(factor)?;
        let rest: Vec<Generator> = alphabet.generators().iter().copied().filter(|g| !factor.contains(g)).collect();
        let ca = alphabet.subset(&rest)?;
        Ok(FreeFactorSpec {
            factor: fa.generators().to_vec(),
            factor_cfg: CayleyOrderConfig::new(fa),
            complement_cfg: CayleyOrderConfig::new(ca),
            alphabet,
        })
    }

    pub fn with_orders(mut self, factor_cfg: CayleyOrderConfig, complement_cfg: CayleyOrderConfig) -> Result<Self> {
        if factor_cfg.alphabet.generators() != self.factor_cfg.alphabet.generators()
            || complement_cfg.alphabet.generators() != self.complement_cfg.alphabet.generators()
        {
            return Err(Error::Spec("factor orders must use the factor alphabets".into()));
        }
        self.factor_cfg = factor_cfg;
        self.complement_cfg = complement_cfg;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn factor(&self) -> &[Generator] {
        &self.factor
    }

    pub fn factor_cfg(&self) -> &CayleyOrderConfig {
        &self.factor_cfg
    }

    pub fn in_factor(&self, w: &Word) -> bool {
        w.generators().all(|g| self.factor.contains(&g))
    }

    pub fn factor_membership(&self) -> Membership {
        let f = self.factor.clone();
        Arc::new(move |w: &Word| w.generators().all(|g| f.contains(&g)))
    }

    /// `sum_i sign_B(1 < b_i) + sum_{i>=2} sign_A(1 < a_i)` for
    /// `g<Y> = a1 b1 ... an bn <Y>`.
    pub fn turn_sum(&self, g: &Word) -> i64 {
        let mut syl = g.syllables(|x| self.factor.contains(&x));
        if syl.last().is_some_and(|(in_a, _)| *in_a) {
            syl.pop();
        }
        syl.iter()
            .enumerate()
            .map(|(i, (in_a, w))| match (in_a, i) {
                (false, _) => self.complement_cfg.sign(w).value(),
                (true, 0) => 0,
                (true, _) => self.factor_cfg.sign(w).value(),
            })
            .sum()
    }

    pub fn sign(&self, g: &Word) -> Sign {
        Sign::of(self.turn_sum(g))
    }
}

/// `sign(u<Y>, <, v<Y>)`.
pub fn free_factor_compare(spec: &FreeFactorSpec, u: &Word, v: &Word) -> Result<Sign> {
    spec.alphabet.check(u)?;
    spec.alphabet.check(v)?;
    Ok(spec.sign(&u.inverse().mul(v)))
}

/// The order on `F/<Y>` as a coset space.
pub fn free_factor_order(spec: &FreeFactorSpec) -> OrderedCosetSpace {
    let group: Arc<dyn Group> = Arc::new(FreeGroup::new(spec.alphabet.clone()));
    let s = spec.clone();
    OrderedCosetSpace::from_base_sign(group, spec.factor_membership(), move |g| {
        s.alphabet.check(g)?;
        Ok(s.sign(g))
    })
}

/// Left order on `F` with `<Y>` convex: the factor order on top, the
/// Cayley order of `<Y>` at the bottom.
pub fn left_order_on_free_group_via_factor(spec: &FreeFactorSpec) -> OrderedCosetSpace {
    let top = free_factor_order(spec);
    let group = top.group().clone();
    let fcfg = spec.factor_cfg.clone();
    let bottom = OrderedCosetSpace::from_base_sign(group, Arc::new(|w: &Word| w.is_empty()), move |h| {
        fcfg.alphabet.check(h)?;
        Ok(fcfg.sign(h))
    });
    compose(&SubgroupChainOrder::new(top, bottom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::associated_sign;

    fn ab() -> Alphabet {
        Alphabet::from_names(&["a", "b"]).unwrap()
    }

    #[test]
    fn cayley_examples() {
        let cfg = CayleyOrderConfig::new(ab());
        let p = |s| ab().parse(s).unwrap();
        let one = Word::identity();
        assert_eq!(cayley_compare(&cfg, &one, &one).unwrap(), Sign::Zero);
        assert_eq!(cfg.sums(&p("a b")), PathSums { orientation: 2, turn: 1 });
        assert_eq!(cayley_compare(&cfg, &one, &p("a b")).unwrap(), Sign::Pos);
        assert_eq!(cfg.sums(&p("b a^-1")), PathSums { orientation: 0, turn: -1 });
        assert_eq!(cayley_compare(&cfg, &one, &p("b a^-1")).unwrap(), Sign::Neg);
        assert_eq!(cayley_compare(&cfg, &one, &p("a^-1")).unwrap(), Sign::Neg);
    }

    #[test]
    fn cayley_formula_matches_tree_path() {
        let cfg = CayleyOrderConfig::new(ab());
        let local = cayley_local_order(&cfg);
        let ball = crate::ball::ball(&FreeGroup::new(ab()), 3);
        for u in ball.iter().step_by(5) {
            for v in &ball {
                let tree = associated_sign(&cayley_path(u, v), &local).unwrap();
                assert_eq!(tree, cayley_compare(&cfg, u, v).unwrap(), "{u} vs {v}");
            }
        }
    }

    #[test]
    fn custom_base_order_validation() {
        assert!(CayleyOrderConfig::parse_base_order(ab(), &["a", "a^-1", "b"]).is_err());
        assert!(CayleyOrderConfig::parse_base_order(ab(), &["a", "a", "b", "b^-1"]).is_err());
        let c = CayleyOrderConfig::parse_base_order(ab(), &["b^-1", "a", "b", "a^-1"]).unwrap();
        assert_eq!(c.letter_rank(ab().parse("b^-1").unwrap().letters()[0]), 0);
    }

    #[test]
    fn free_factor_examples() {
        let al = ab();
        let a = al.get("a").unwrap();
        let spec = FreeFactorSpec::new(al.clone(), &[a]).unwrap();
        let p = |s| al.parse(s).unwrap();
        let one = Word::identity();
        assert_eq!(free_factor_compare(&spec, &one, &p("a^5")).unwrap(), Sign::Zero);
        assert_eq!(free_factor_compare(&spec, &one, &p("b")).unwrap(), Sign::Pos);
        assert_eq!(spec.turn_sum(&p("b^-1 a b")), 1);
        assert_eq!(free_factor_compare(&spec, &one, &p("b^-1 a b")).unwrap(), Sign::Pos);
    }

    #[test]
    fn degenerate_factors() {
        let al = ab();
        let whole = FreeFactorSpec::new(al.clone(), al.generators()).unwrap();
        let empty = FreeFactorSpec::new(al.clone(), &[]).unwrap();
        let cfg = CayleyOrderConfig::new(al.clone());
        for g in crate::ball::ball(&FreeGroup::new(al.clone()), 3) {
            assert_eq!(whole.sign(&g), Sign::Zero);
            assert_eq!(empty.sign(&g), cfg.sign(&g));
        }
    }

    #[test]
    fn composed_order_examples() {
        let al = ab();
        let a = al.get("a").unwrap();
        let spec = FreeFactorSpec::new(al.clone(), &[a]).unwrap();
        let ord = left_order_on_free_group_via_factor(&spec);
        let p = |s| al.parse(s).unwrap();
        assert_eq!(ord.compare(&p("a^-1"), &p("a")), Sign::Pos);
        assert_eq!(ord.compare(&p("a"), &p("b")), free_factor_compare(&spec, &p("a"), &p("b")).unwrap());
    }
}
