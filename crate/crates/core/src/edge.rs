//! Marked edge subgroups of vertex groups: membership, a transversal for
//! left cosets, the relative order on the coset space, and coordinates over
//! a fixed basis so that edge maps can be written down.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::free::FreeFactorSpec;
use crate::order::{Group, OrderedCosetSpace, Sign};
use crate::words::{Alphabet, Generator, Word};

/// A word over the abstract basis `e_0, e_1, ...` of an edge group.
pub type BasisWord = Vec<(usize, i8)>;

/// A subgroup `C` of a vertex group `A` together with an `A`-order on `A/C`.
/// Inputs are normal forms of `A`.
pub trait EdgeSubgroup: Send + Sync {
    fn contains(&self, g: &Word) -> bool;

    /// `g = r c` with `c` in `C` and `r` depending only on `gC`; `r` is the
    /// identity exactly when `g` is in `C`.
    fn transversal(&self, g: &Word) -> (Word, Word);

    /// `sign(C, <, gC)`.
    fn relative_sign(&self, g: &Word) -> Sign;

    /// Coordinates of a member of `C` over the basis.
    fn to_basis(&self, c: &Word) -> BasisWord;

    #[allow(clippy::wrong_self_convention)]
    fn from_basis(&self, coords: &[(usize, i8)]) -> Word;

    fn rank(&self) -> usize;

    fn generators(&self) -> Vec<Word> {
        (0..self.rank()).map(|i| self.from_basis(&[(i, 1)])).collect()
    }
}

/// The relative order on `A/C` as a coset space of `A`.
pub fn relative_order(vertex: Arc<dyn Group>, c: Arc<dyn EdgeSubgroup>) -> OrderedCosetSpace {
    let member = c.clone();
    OrderedCosetSpace::from_base_sign(vertex, Arc::new(move |w: &Word| member.contains(w)), move |g| {
        Ok(c.relative_sign(g))
    })
}

/// Carries `c in C` across an edge: `target(source^-1(c))` through the
/// shared basis.
pub fn transfer(from: &dyn EdgeSubgroup, to: &dyn EdgeSubgroup, c: &Word) -> Word {
    to.from_basis(&from.to_basis(c))
}

/// A subgroup of a free group `F(X)` that is a free factor up to an
/// elementary automorphism: each generator `w_i` contains exactly one
/// occurrence of a letter `y_i`, and no `y_i` occurs in any other `w_j`.
/// The automorphism `phi: y_i -> w_i` carries `<Y>` onto `C`, so all coset
/// computations happen on `phi^-1(g)` in `F/<Y>`.
#[derive(Clone, Debug)]
pub struct FactorSubgroup {
    gens: Vec<Word>,
    basis: Vec<Generator>,
    index: HashMap<Generator, usize>,
    phi: HashMap<Generator, Word>,
    phi_inv: HashMap<Generator, Word>,
    factor: FreeFactorSpec,
}

impl FactorSubgroup {
    pub fn new(alphabet: &Alphabet, gens: Vec<Word>) -> Result<Self> {
        let mut basis = Vec::new();
        for (i, w) in gens.iter().enumerate() {
            alphabet.check(w)?;
            let once = alphabet.generators().iter().copied().find(|&g| {
                w.generators().filter(|&x| x == g).count() == 1
                    && gens.iter().enumerate().all(|(j, v)| j == i || v.generators().all(|x| x != g))
            });
            match once {
                Some(g) => basis.push(g),
                None => {
                    return Err(Error::Spec(format!("edge generator `{w}` is not a basis element of a free factor")))
                }
            }
        }
        let mut phi = HashMap::new();
        let mut phi_inv = HashMap::new();
        for (w, &y) in gens.iter().zip(&basis) {
            let pos = w.letters().iter().position(|l| l.gen == y).unwrap();
            let l = w.letters()[pos];
            let pre = Word::reduce(w.letters()[..pos].iter().copied());
            let suf = Word::reduce(w.letters()[pos + 1..].iter().copied());
            // w = p y^e s  =>  phi^-1(y) = (p^-1 y s^-1)^e
            let inv = pre.inverse().mul(&Word::letter(y.pos())).mul(&suf.inverse());
            phi.insert(y, w.clone());
            phi_inv.insert(y, if l.exp > 0 { inv } else { inv.inverse() });
        }
        let factor = FreeFactorSpec::new(alphabet.clone(), &basis)?;
        let index = basis.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        Ok(FactorSubgroup { gens, basis, index, phi, phi_inv, factor })
    }

    fn pull(&self, g: &Word) -> Word {
        g.substitute(|x| self.phi_inv.get(&x).cloned())
    }

    fn push(&self, g: &Word) -> Word {
        g.substitute(|x| self.phi.get(&x).cloned())
    }

    pub fn basis_letters(&self) -> &[Generator] {
        &self.basis
    }
}

impl EdgeSubgroup for FactorSubgroup {
    fn contains(&self, g: &Word) -> bool {
        self.factor.in_factor(&self.pull(g))
    }

    fn transversal(&self, g: &Word) -> (Word, Word) {
        let p = self.pull(g);
        let ls = p.letters();
        let cut = ls.iter().rposition(|l| !self.index.contains_key(&l.gen)).map_or(0, |i| i + 1);
        let r = Word::reduce(ls[..cut].iter().copied());
        let c = Word::reduce(ls[cut..].iter().copied());
        (self.push(&r), self.push(&c))
    }

    fn relative_sign(&self, g: &Word) -> Sign {
        self.factor.sign(&self.pull(g))
    }

    fn to_basis(&self, c: &Word) -> BasisWord {
        self.pull(c).letters().iter().map(|l| (self.index[&l.gen], l.exp)).collect()
    }

    fn from_basis(&self, coords: &[(usize, i8)]) -> Word {
        let mut out = Word::identity();
        for &(i, e) in coords {
            out = if e > 0 { out.mul(&self.gens[i]) } else { out.mul(&self.gens[i].inverse()) };
        }
        out
    }

    fn rank(&self) -> usize {
        self.gens.len()
    }

    fn generators(&self) -> Vec<Word> {
        self.gens.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::ball;
    use crate::order::FreeGroup;

    fn setup(gens: &[&str]) -> (Alphabet, FactorSubgroup) {
        let al = Alphabet::from_names(&["y", "z1", "z2"]).unwrap();
        let ws = gens.iter().map(|s| al.parse(s).unwrap()).collect();
        let c = FactorSubgroup::new(&al, ws).unwrap();
        (al, c)
    }

    fn check_laws(al: &Alphabet, c: &FactorSubgroup) {
        let g = FreeGroup::new(al.clone());
        let b = ball(&g, 3);
        for w in &b {
            let (r, k) = c.transversal(w);
            assert_eq!(r.mul(&k), *w);
            assert!(c.contains(&k));
            assert_eq!(c.contains(w), r.is_empty());
            assert_eq!(c.transversal(&r), (r.clone(), Word::identity()));
            if c.contains(w) {
                assert_eq!(c.from_basis(&c.to_basis(w)), *w);
            }
        }
        // r depends only on the coset
        for w in b.iter().take(40) {
            for gen in c.generators() {
                assert_eq!(c.transversal(&w.mul(&gen)).0, c.transversal(w).0);
                assert_eq!(c.relative_sign(&w.mul(&gen)), c.relative_sign(w));
            }
        }
    }

    #[test]
    fn plain_factor() {
        let (al, c) = setup(&["y"]);
        check_laws(&al, &c);
        assert!(c.contains(&al.parse("y^3").unwrap()));
        assert!(!c.contains(&al.parse("z1").unwrap()));
    }

    #[test]
    fn transported_factor() {
        let (al, c) = setup(&["z2^-1 z1^-1 z2 z1 y^-1"]);
        check_laws(&al, &c);
        let d = al.parse("z2^-1 z1^-1 z2 z1 y^-1").unwrap();
        assert!(c.contains(&d.pow(-2)));
        assert!(!c.contains(&al.parse("y").unwrap()));
        assert_eq!(c.to_basis(&d.pow(2)), vec![(0, 1), (0, 1)]);
    }

    #[test]
    fn non_factor_is_refused() {
        let al = Alphabet::from_names(&["a", "b"]).unwrap();
        assert!(FactorSubgroup::new(&al, vec![al.parse("a^2").unwrap()]).is_err());
        assert!(FactorSubgroup::new(&al, vec![al.parse("a b").unwrap(), al.parse("b a").unwrap()]).is_err());
    }
}
