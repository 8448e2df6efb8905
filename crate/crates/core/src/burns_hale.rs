//! Local orders on `F/C` for a maximal cyclic `C`, certified by a chain of
//! surjections onto `Z`: each stage maps `<X_k u C>` onto `Z` killing `C`,
//! and the elements it kills form `X_{k+1}`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{FreeGroup, OrderedCosetSpace, Sign};
use crate::snf::{quotient_onto_z, words_as_strings, Surjection, ZLinearMap};
use crate::stallings::{stallings_graph, StallingsGraph};
use crate::words::{Alphabet, Word};

#[derive(Clone, Debug)]
pub struct ZChainOrder {
    alphabet: Alphabet,
    c_root: Word,
    c_graph: StallingsGraph,
    domain: Vec<Word>,
    stages: Vec<Surjection>,
}

/// Builds the chain for `X` and `C = <c_root>`.
pub fn burns_hale_chain(alphabet: &Alphabet, x: &[Word], c_root: &Word) -> Result<ZChainOrder> {
    alphabet.check(c_root)?;
    let (_, k) = c_root.root()?;
    if k != 1 {
        return Err(Error::Precondition(format!("{c_root} is a proper power, so <{c_root}> is not maximal cyclic")));
    }
    let c_graph = stallings_graph(alphabet, std::slice::from_ref(c_root))?;
    for w in x {
        alphabet.check(w)?;
        if c_graph.contains(w) {
            return Err(Error::Precondition(format!("{w} lies in C = <{c_root}>")));
        }
    }
    let mut residual: Vec<Word> = x.to_vec();
    let mut stages = Vec::new();
    while !residual.is_empty() {
        let mut gens = residual.clone();
        gens.push(c_root.clone());
        let phi = quotient_onto_z(alphabet, &gens, std::slice::from_ref(c_root))?
            .ok_or_else(|| Error::Precondition(format!("<X, {c_root}> / <<{c_root}>> has finite abelianization")))?;
        let next: Vec<Word> = residual.iter().filter(|w| phi.eval(w) == Some(0)).cloned().collect();
        assert!(next.len() < residual.len(), "stage did not shrink the residual set");
        stages.push(phi);
        residual = next;
    }
    Ok(ZChainOrder { alphabet: alphabet.clone(), c_root: c_root.clone(), c_graph, domain: x.to_vec(), stages })
}

impl ZChainOrder {
    pub fn stages(&self) -> impl Iterator<Item = &ZLinearMap> {
        self.stages.iter().map(|s| &s.map)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn domain(&self) -> &[Word] {
        &self.domain
    }

    pub fn in_c(&self, g: &Word) -> bool {
        self.c_graph.contains(g)
    }

    pub fn c_root(&self) -> &Word {
        &self.c_root
    }
}

/// Sign of the first stage that does not kill `g`; `Zero` for `g` in `C`.
pub fn chain_sign(chain: &ZChainOrder, g: &Word) -> Result<Sign> {
    for (i, stage) in chain.stages.iter().enumerate() {
        let v = stage.eval(g).ok_or_else(|| Error::Domain(format!("{g} is outside stage {i} of the certificate")))?;
        if v != 0 {
            return Ok(Sign::of(v));
        }
    }
    if chain.in_c(g) {
        Ok(Sign::Zero)
    } else {
        Err(Error::Domain(format!("{g} is not ordered by the certificate")))
    }
}

/// A certified order on the finite universe `{C} u {xC | x in X}`.
#[derive(Clone, Debug)]
pub struct LocalCosetOrder {
    chain: ZChainOrder,
    universe: Vec<Word>,
}

#[derive(Serialize)]
struct Certificate<'a> {
    #[serde(rename = "C")]
    c: String,
    #[serde(serialize_with = "words_as_strings")]
    universe: &'a [Word],
    chain: Vec<&'a ZLinearMap>,
}

impl LocalCosetOrder {
    pub fn chain(&self) -> &ZChainOrder {
        &self.chain
    }

    /// Coset representatives, starting with the identity.
    pub fn universe(&self) -> &[Word] {
        &self.universe
    }

    fn representative(&self, g: &Word) -> Result<&Word> {
        self.universe
            .iter()
            .find(|x| self.chain.in_c(&x.inverse().mul(g)))
            .ok_or_else(|| Error::Domain(format!("{g}C is outside the certified universe")))
    }

    pub fn compare(&self, u: &Word, v: &Word) -> Result<Sign> {
        let (xu, xv) = (self.representative(u)?, self.representative(v)?);
        chain_sign(&self.chain, &xu.inverse().mul(xv))
    }

    pub fn to_json(&self) -> String {
        let cert = Certificate {
            c: self.chain.c_root.to_string(),
            universe: &self.universe,
            chain: self.chain.stages().collect(),
        };
        serde_json::to_string_pretty(&cert).expect("certificate serializes")
    }

    /// As a coset space of the free group; out-of-universe queries are
    /// domain errors.
    pub fn space(&self) -> OrderedCosetSpace {
        let me = self.clone();
        let c = self.chain.c_graph.clone();
        OrderedCosetSpace::from_compare(
            Arc::new(FreeGroup::new(self.chain.alphabet.clone())),
            Arc::new(move |g: &Word| c.contains(g)),
            move |u, v| me.compare(u, v),
        )
    }
}

/// Closes `X u {1}` under `x^-1 y`, drops members of `C`, and certifies the
/// result.
pub fn local_coset_order(alphabet: &Alphabet, c_root: &Word, x: &[Word]) -> Result<LocalCosetOrder> {
    alphabet.check(c_root)?;
    let c_graph = stallings_graph(alphabet, std::slice::from_ref(c_root))?;
    let mut universe = vec![Word::identity()];
    for w in x {
        alphabet.check(w)?;
        if !universe.iter().any(|u| c_graph.contains(&u.inverse().mul(w))) {
            universe.push(w.clone());
        }
    }
    let mut full: Vec<Word> = Vec::new();
    for u in &universe {
        for v in &universe {
            let q = u.inverse().mul(v);
            if !c_graph.contains(&q) && !full.contains(&q) {
                full.push(q);
            }
        }
    }
    let chain = burns_hale_chain(alphabet, &full, c_root)?;
    Ok(LocalCosetOrder { chain, universe })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_names(&["a", "b"]).unwrap()
    }

    #[test]
    fn chain_examples() {
        let al = ab();
        let p = |t| al.parse(t).unwrap();
        let c = p("a b");
        let ch = burns_hale_chain(&al, &[p("a")], &c).unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!(chain_sign(&ch, &p("a")).unwrap(), Sign::Pos);
        assert_eq!(chain_sign(&ch, &p("a^-1")).unwrap(), Sign::Neg);
        assert_eq!(chain_sign(&ch, &p("a^2")).unwrap(), Sign::Pos);
        assert_eq!(chain_sign(&ch, &p("a b a b")).unwrap(), Sign::Zero);
        let conj = p("a b a b^-1 a^-1");
        let ch = burns_hale_chain(&al, std::slice::from_ref(&conj), &c).unwrap();
        assert_eq!(chain_sign(&ch, &conj).unwrap(), Sign::Pos);
        let empty = burns_hale_chain(&al, &[], &c).unwrap();
        assert!(empty.is_empty());
        assert_eq!(chain_sign(&empty, &c).unwrap(), Sign::Zero);
        assert!(matches!(chain_sign(&empty, &p("a")), Err(Error::Domain(_))));
    }

    #[test]
    fn preconditions() {
        let al = ab();
        let p = |t| al.parse(t).unwrap();
        assert!(matches!(burns_hale_chain(&al, &[p("a")], &p("a b a b")), Err(Error::Precondition(_))));
        assert!(matches!(burns_hale_chain(&al, &[p("a b")], &p("a b")), Err(Error::Precondition(_))));
    }

    #[test]
    fn local_order_examples() {
        let al = ab();
        let p = |t| al.parse(t).unwrap();
        let ord = local_coset_order(&al, &p("a b"), &[p("a")]).unwrap();
        assert_eq!(ord.compare(&Word::identity(), &p("a")).unwrap(), Sign::Pos);
        assert_eq!(ord.compare(&p("a"), &p("a").mul(&p("a b").pow(3))).unwrap(), Sign::Zero);
        assert!(matches!(ord.compare(&Word::identity(), &p("b")), Err(Error::Domain(_))));
        let json: serde_json::Value = serde_json::from_str(&ord.to_json()).unwrap();
        assert_eq!(json["C"], "a b");
        assert_eq!(json["chain"][0]["phi"], serde_json::json!([1, -1]));

        let two = local_coset_order(&al, &p("a b"), &[p("a"), p("b")]).unwrap();
        let u = two.universe().to_vec();
        assert_eq!(u.len(), 3);
        for x in &u {
            for y in &u {
                let s = two.compare(x, y).unwrap();
                assert_eq!(s, -two.compare(y, x).unwrap());
                assert_eq!(s == Sign::Zero, x == y);
                for z in &u {
                    if s == Sign::Pos && two.compare(y, z).unwrap() == Sign::Pos {
                        assert_eq!(two.compare(x, z).unwrap(), Sign::Pos);
                    }
                }
            }
        }
    }
}
