//! Right-angled Artin groups: left-greedy normal forms, parabolic retracts,
//! and left orders (relative to any parabolic) built by splitting off one
//! generator at a time as an HNN extension.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::edge::{BasisWord, EdgeSubgroup};
use crate::error::{Error, Result};
use crate::hnn::{hnn_vertex_order, HnnSpec};
use crate::order::{compose, Group, Membership, OrderedCosetSpace, Sign, SubgroupChainOrder};
use crate::words::{Alphabet, Generator, Letter, Word};

/// `<X | [x, y] for {x, y} in R>`.
#[derive(Clone, Debug)]
pub struct RaagSpec {
    alphabet: Alphabet,
    commuting: HashSet<(Generator, Generator)>,
}

fn pair(x: Generator, y: Generator) -> (Generator, Generator) {
    if x.id() <= y.id() {
        (x, y)
    } else {
        (y, x)
    }
}

impl RaagSpec {
    pub fn new(alphabet: Alphabet, pairs: &[(Generator, Generator)]) -> Result<Self> {
        let mut commuting = HashSet::new();
        for &(x, y) in pairs {
            for g in [x, y] {
                if !alphabet.contains(g) {
                    return Err(Error::UnknownGenerator(g.name().to_string()));
                }
            }
            if x == y {
                return Err(Error::Spec(format!("commuting pair ({x}, {x}) repeats a generator")));
            }
            if !commuting.insert(pair(x, y)) {
                return Err(Error::Spec(format!("commuting pair ({x}, {y}) listed twice")));
            }
        }
        Ok(RaagSpec { alphabet, commuting })
    }

    pub fn commute(&self, x: Generator, y: Generator) -> bool {
        x == y || self.commuting.contains(&pair(x, y))
    }

    pub fn commuting_pairs(&self) -> Vec<(Generator, Generator)> {
        let mut out: Vec<_> = self.commuting.iter().copied().collect();
        out.sort_by_key(|&(x, y)| (self.alphabet.position(x), self.alphabet.position(y)));
        out
    }

    /// The raag on `gens` with the induced commuting pairs.
    pub fn restrict(&self, gens: &[Generator]) -> Result<RaagSpec> {
        let alphabet = self.alphabet.subset(gens)?;
        let pairs: Vec<_> =
            self.commuting.iter().copied().filter(|(x, y)| alphabet.contains(*x) && alphabet.contains(*y)).collect();
        RaagSpec::new(alphabet, &pairs)
    }

    /// Generators of `X - {x}` commuting with `x`.
    pub fn link(&self, x: Generator) -> Vec<Generator> {
        self.alphabet.generators().iter().copied().filter(|&y| y != x && self.commute(x, y)).collect()
    }

    fn rank(&self, l: Letter) -> usize {
        2 * self.alphabet.position(l.gen).unwrap_or(usize::MAX / 4) + (l.exp < 0) as usize
    }

    /// Cancels across commuting letters, then emits the smallest letter that
    /// commutes with everything before it, repeatedly.
    fn normal_form(&self, w: &Word) -> Word {
        let mut reduced: Vec<Letter> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let mut hit = None;
            for (i, &m) in reduced.iter().enumerate().rev() {
                if m == l.inverse() {
                    hit = Some(i);
                    break;
                }
                if !self.commute(m.gen, l.gen) {
                    break;
                }
            }
            match hit {
                Some(i) => {
                    reduced.remove(i);
                }
                None => reduced.push(l),
            }
        }
        let mut out = Vec::with_capacity(reduced.len());
        while !reduced.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..reduced.len() {
                let free = reduced[..i].iter().all(|m| m.gen != reduced[i].gen && self.commute(m.gen, reduced[i].gen));
                if free && best.is_none_or(|b| self.rank(reduced[i]) < self.rank(reduced[b])) {
                    best = Some(i);
                }
            }
            out.push(reduced.remove(best.unwrap()));
        }
        Word::reduce(out)
    }
}

impl Group for RaagSpec {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn normalize(&self, w: &Word) -> Word {
        self.normal_form(w)
    }
}

/// Letters in left-greedy canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RaagNormalForm(pub Word);

impl fmt::Display for RaagNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn raag_normal_form(spec: &RaagSpec, w: &Word) -> Result<RaagNormalForm> {
    spec.alphabet.check(w)?;
    Ok(RaagNormalForm(spec.normal_form(w)))
}

fn check_subset(spec: &RaagSpec, y: &[Generator]) -> Result<()> {
    match y.iter().find(|g| !spec.alphabet.contains(**g)) {
        Some(g) => Err(Error::Spec(format!("`{g}` is not a generator of the raag"))),
        None => Ok(()),
    }
}

fn project(spec: &RaagSpec, y: &[Generator], w: &Word) -> Word {
    spec.normal_form(&Word::reduce(w.letters().iter().copied().filter(|l| y.contains(&l.gen))))
}

/// The retract `G -> <Y>` killing `X - Y`.
pub fn parabolic_projection(spec: &RaagSpec, y: &[Generator], w: &Word) -> Result<Word> {
    check_subset(spec, y)?;
    spec.alphabet.check(w)?;
    Ok(project(spec, y, w))
}

pub fn parabolic_member(spec: &RaagSpec, y: &[Generator], w: &Word) -> Result<bool> {
    check_subset(spec, y)?;
    spec.alphabet.check(w)?;
    Ok(spec.normal_form(w).generators().all(|g| y.contains(&g)))
}

pub fn parabolic_membership(spec: Arc<RaagSpec>, y: Vec<Generator>) -> Membership {
    Arc::new(move |w: &Word| spec.normal_form(w).generators().all(|g| y.contains(&g)))
}

/// A parabolic `<Y>` of a raag as an edge subgroup. Transversal
/// representatives are `g pi(g)^-1`; the relative order is
/// [`raag_parabolic_order`].
pub struct RaagParabolic {
    spec: Arc<RaagSpec>,
    y: Vec<Generator>,
    order: OrderedCosetSpace,
}

impl RaagParabolic {
    pub fn new(spec: Arc<RaagSpec>, y: Vec<Generator>) -> Result<Self> {
        check_subset(&spec, &y)?;
        let order = raag_parabolic_order(spec.clone(), &y)?;
        Ok(RaagParabolic { spec, y, order })
    }
}

impl EdgeSubgroup for RaagParabolic {
    fn contains(&self, g: &Word) -> bool {
        self.spec.normal_form(g).generators().all(|x| self.y.contains(&x))
    }

    fn transversal(&self, g: &Word) -> (Word, Word) {
        let c = project(&self.spec, &self.y, g);
        (self.spec.normal_form(&g.mul(&c.inverse())), c)
    }

    fn relative_sign(&self, g: &Word) -> Sign {
        self.order.compare(&Word::identity(), g)
    }

    fn to_basis(&self, c: &Word) -> BasisWord {
        c.letters().iter().map(|l| (self.y.iter().position(|&g| g == l.gen).unwrap(), l.exp)).collect()
    }

    fn from_basis(&self, coords: &[(usize, i8)]) -> Word {
        self.spec.normal_form(&Word::reduce(coords.iter().map(|&(i, e)| Letter { gen: self.y[i], exp: e })))
    }

    fn rank(&self) -> usize {
        self.y.len()
    }
}

/// `G = A *_C x` with `A` the raag on `X - {x}`, `C = D` the parabolic on
/// the link of `x`, and the identity edge map.
pub fn hnn_decomposition(spec: &RaagSpec, x: Generator) -> Result<HnnSpec> {
    if !spec.alphabet.contains(x) {
        return Err(Error::UnknownGenerator(x.name().to_string()));
    }
    let rest: Vec<Generator> = spec.alphabet.generators().iter().copied().filter(|&g| g != x).collect();
    let a = Arc::new(spec.restrict(&rest)?);
    let c: Arc<dyn EdgeSubgroup> = Arc::new(RaagParabolic::new(a.clone(), spec.link(x))?);
    HnnSpec::new(a, c.clone(), c, x)
}

/// The recursion pivot for a target parabolic: the last generator outside it.
pub fn pivot(spec: &RaagSpec, y: &[Generator]) -> Option<Generator> {
    spec.alphabet.generators().iter().rev().copied().find(|g| !y.contains(g))
}

/// An order on `G/<Y>`: split at the pivot, order `G/A` on the HNN tree and
/// `A/<Y>` recursively. `Y = X` gives the trivial order.
pub fn raag_parabolic_order(spec: Arc<RaagSpec>, y: &[Generator]) -> Result<OrderedCosetSpace> {
    check_subset(&spec, y)?;
    let Some(x) = pivot(&spec, y) else {
        return Ok(OrderedCosetSpace::trivial(spec));
    };
    let hnn = Arc::new(hnn_decomposition(&spec, x)?);
    let a: Arc<RaagSpec> = {
        let rest: Vec<Generator> = spec.alphabet.generators().iter().copied().filter(|&g| g != x).collect();
        Arc::new(spec.restrict(&rest)?)
    };
    let bottom = raag_parabolic_order(a, y)?;
    let composed = compose(&SubgroupChainOrder::new(hnn_vertex_order(hnn), bottom));
    let member = parabolic_membership(spec.clone(), y.to_vec());
    let g = spec.clone();
    Ok(OrderedCosetSpace::from_compare(spec, member, move |u, v| {
        composed.try_compare(&g.normal_form(u), &g.normal_form(v))
    }))
}

pub fn raag_left_order(spec: Arc<RaagSpec>) -> Result<OrderedCosetSpace> {
    raag_parabolic_order(spec, &[])
}

/// Left order on `G` with `<Y>` convex: [`raag_parabolic_order`] on top, the
/// left order of the raag on `Y` at the bottom.
pub fn raag_left_order_with_convex(spec: Arc<RaagSpec>, y: &[Generator]) -> Result<OrderedCosetSpace> {
    let top = raag_parabolic_order(spec.clone(), y)?;
    let bottom = raag_left_order(Arc::new(spec.restrict(y)?))?;
    let composed = compose(&SubgroupChainOrder::new(top, bottom));
    let g = spec.clone();
    Ok(OrderedCosetSpace::from_compare(spec, Arc::new(move |w: &Word| g.is_identity(w)), move |u, v| {
        composed.try_compare(u, v)
    }))
}
