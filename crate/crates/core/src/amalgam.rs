//! Free products with amalgamation `A *_C B`: normal forms, the order on
//! `G/A` read off the Bass–Serre tree, and left orders with `A` convex.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::edge::{relative_order, transfer, BasisWord, EdgeSubgroup};
use crate::error::{Error, Result};
use crate::order::{compose, Group, OrderedCosetSpace, Sign, SubgroupChainOrder};
use crate::tree::{associated_sign, local_order_from_orbits, LinkLocator, OrbitLocalOrder, TreePath};
use crate::words::{Alphabet, Generator, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Vertex groups `A`, `B` over disjoint alphabets, and the two copies of `C`
/// identified through their shared basis.
#[derive(Clone)]
pub struct AmalgamSpec {
    alphabet: Alphabet,
    a: Arc<dyn Group>,
    b: Arc<dyn Group>,
    c_a: Arc<dyn EdgeSubgroup>,
    c_b: Arc<dyn EdgeSubgroup>,
    order_a: Option<OrderedCosetSpace>,
}

impl AmalgamSpec {
    pub fn new(
        a: Arc<dyn Group>,
        c_a: Arc<dyn EdgeSubgroup>,
        b: Arc<dyn Group>,
        c_b: Arc<dyn EdgeSubgroup>,
    ) -> Result<Self> {
        if c_a.rank() != c_b.rank() {
            return Err(Error::Spec(format!(
                "edge subgroups have different ranks ({} and {})",
                c_a.rank(),
                c_b.rank()
            )));
        }
        let mut gens = a.alphabet().generators().to_vec();
        for &g in b.alphabet().generators() {
            if a.alphabet().contains(g) {
                return Err(Error::Spec(format!("generator `{g}` appears in both vertex groups")));
            }
            gens.push(g);
        }
        Ok(AmalgamSpec { alphabet: Alphabet::new(gens)?, a, b, c_a, c_b, order_a: None })
    }

    /// Supplies the full left order on `A` used at the bottom of
    /// [`left_order_on_amalgam`].
    pub fn with_left_order(mut self, order_a: OrderedCosetSpace) -> Self {
        self.order_a = Some(order_a);
        self
    }

    pub fn vertex(&self, side: Side) -> &Arc<dyn Group> {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn edge(&self, side: Side) -> &Arc<dyn EdgeSubgroup> {
        match side {
            Side::A => &self.c_a,
            Side::B => &self.c_b,
        }
    }

    pub fn side_of(&self, g: Generator) -> Side {
        if self.a.alphabet().contains(g) {
            Side::A
        } else {
            Side::B
        }
    }

    /// `c -> c^x`, from the `A` copy of `C` to the `B` copy.
    pub fn edge_map(&self, c: &Word) -> Word {
        transfer(self.c_a.as_ref(), self.c_b.as_ref(), c)
    }

    pub fn edge_map_inv(&self, c: &Word) -> Word {
        transfer(self.c_b.as_ref(), self.c_a.as_ref(), c)
    }

    fn normal_form(&self, w: &Word) -> AmalgamNormalForm {
        let mut stack: Vec<(Side, Word)> = Vec::new();
        let mut tail: BasisWord = Vec::new();
        for (in_a, syl) in w.syllables(|g| self.a.alphabet().contains(g)) {
            let side = if in_a { Side::A } else { Side::B };
            let (group, edge) = (self.vertex(side), self.edge(side));
            let c = edge.from_basis(&tail);
            let x = match stack.last() {
                Some((s, _)) if *s == side => {
                    let (_, r) = stack.pop().unwrap();
                    group.normalize(&r.mul(&c).mul(&syl))
                }
                _ => group.normalize(&c.mul(&syl)),
            };
            let (r, c) = edge.transversal(&x);
            if !r.is_empty() {
                stack.push((side, r));
            }
            tail = edge.to_basis(&c);
        }
        AmalgamNormalForm { syllables: stack, c_part: self.c_a.from_basis(&tail) }
    }

    pub fn in_a(&self, g: &Word) -> bool {
        let nf = self.normal_form(g);
        nf.syllables.iter().all(|(s, _)| *s == Side::A)
    }

    /// Writes `g` as an element of one vertex group, if it lies there.
    pub fn as_vertex_element(&self, side: Side, g: &Word) -> Option<Word> {
        let nf = self.normal_form(g);
        let tail = match side {
            Side::A => nf.c_part.clone(),
            Side::B => self.edge_map(&nf.c_part),
        };
        match nf.syllables.as_slice() {
            [] => Some(tail),
            [(s, r)] if *s == side => Some(self.vertex(side).normalize(&r.mul(&tail))),
            _ => None,
        }
    }
}

impl Group for AmalgamSpec {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn normalize(&self, w: &Word) -> Word {
        self.normal_form(w).to_word()
    }
}

impl fmt::Debug for AmalgamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AmalgamSpec")
            .field("a", self.a.alphabet())
            .field("b", self.b.alphabet())
            .field("c", &self.c_a.generators())
            .finish_non_exhaustive()
    }
}

/// Alternating transversal representatives followed by a part in `C`,
/// written over the `A` alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamNormalForm {
    pub syllables: Vec<(Side, Word)>,
    pub c_part: Word,
}

impl AmalgamNormalForm {
    pub fn to_word(&self) -> Word {
        let mut out = Word::identity();
        for (_, s) in &self.syllables {
            out = out.mul(s);
        }
        out.mul(&self.c_part)
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty() && self.c_part.is_empty()
    }
}

impl fmt::Display for AmalgamNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (side, s) in &self.syllables {
            write!(f, "{side:?}[{s}] ")?;
        }
        write!(f, "C[{}]", self.c_part)
    }
}

pub fn amalgam_normal_form(spec: &AmalgamSpec, g: &Word) -> Result<AmalgamNormalForm> {
    spec.alphabet.check(g)?;
    Ok(spec.normal_form(g))
}

fn vertex_turn_sum(spec: &AmalgamSpec, g: &Word) -> i64 {
    let mut syl = spec.normal_form(g).syllables;
    if syl.last().is_some_and(|(s, _)| *s == Side::A) {
        syl.pop();
    }
    syl.iter()
        .enumerate()
        .map(|(i, (side, r))| match (side, i) {
            (Side::A, 0) => 0,
            _ => spec.edge(*side).relative_sign(r).value(),
        })
        .sum()
}

/// `sign(uA, <, vA)`: the turn-sum of the tree path, the orientation-sum
/// being zero between vertices of the same type.
pub fn amalgam_vertex_compare(spec: &AmalgamSpec, u: &Word, v: &Word) -> Sign {
    Sign::of(vertex_turn_sum(spec, &spec.normal_form(&u.inverse().mul(v)).to_word()))
}

/// The order on `G/A` as a coset space.
pub fn amalgam_vertex_order(spec: Arc<AmalgamSpec>) -> OrderedCosetSpace {
    let member = spec.clone();
    let s = spec.clone();
    OrderedCosetSpace::from_base_sign(spec, Arc::new(move |g: &Word| member.in_a(g)), move |g| {
        Ok(Sign::of(vertex_turn_sum(&s, g)))
    })
}

/// Left order on `G` with `A` convex; needs a left order on `A`.
pub fn left_order_on_amalgam(spec: Arc<AmalgamSpec>) -> Result<OrderedCosetSpace> {
    let bottom =
        spec.order_a.clone().ok_or_else(|| Error::Precondition("no left order on the vertex group A".into()))?;
    let composed = compose(&SubgroupChainOrder::new(amalgam_vertex_order(spec.clone()), bottom));
    let g = spec.clone();
    Ok(OrderedCosetSpace::from_compare(spec, Arc::new(move |w: &Word| g.is_identity(w)), move |x, y| {
        composed.try_compare(x, y)
    }))
}

/// Vertices `gA`/`gB` and edges `gC` of the Bass–Serre tree, each keyed by a
/// canonical coset representative.
pub type AmalgamVertex = (Side, Word);

fn vertex_key(spec: &AmalgamSpec, side: Side, p: &Word) -> AmalgamVertex {
    let mut nf = spec.normal_form(p);
    nf.c_part = Word::identity();
    if nf.syllables.last().is_some_and(|(s, _)| *s == side) {
        nf.syllables.pop();
    }
    (side, nf.to_word())
}

fn edge_key(spec: &AmalgamSpec, p: &Word) -> Word {
    let mut nf = spec.normal_form(p);
    nf.c_part = Word::identity();
    nf.to_word()
}

/// The reduced tree path from `uA` to `vA`; edges `pC` run `pA -> pB`.
pub fn amalgam_tree_path(spec: &AmalgamSpec, u: &Word, v: &Word) -> TreePath<AmalgamVertex, Word> {
    let g = spec.normal_form(&u.inverse().mul(v));
    let mut syl = g.syllables;
    if syl.last().is_some_and(|(s, _)| *s == Side::A) {
        syl.pop();
    }
    let mut path = TreePath::new(vertex_key(spec, Side::A, u));
    let mut p = spec.normalize(u);
    let mut at = Side::A;
    let step = |p: &Word, at: Side, path: &mut TreePath<AmalgamVertex, Word>| {
        let orientation = if at == Side::A { 1 } else { -1 };
        path.push(edge_key(spec, p), orientation, vertex_key(spec, at.flip(), p));
    };
    for (side, r) in &syl {
        if *side != at {
            step(&p, at, &mut path);
            at = *side;
        }
        p = spec.normalize(&p.mul(r));
    }
    if at == Side::B {
        step(&p, at, &mut path);
    }
    path
}

/// Link locator for the amalgam tree: every link edge at an `A` vertex is
/// in orbit 0, at a `B` vertex in orbit 1.
pub struct AmalgamLinks(pub Arc<AmalgamSpec>);

impl LinkLocator<AmalgamVertex, Word> for AmalgamLinks {
    fn locate(&self, vertex: &AmalgamVertex, edge: &Word) -> Result<(usize, Word)> {
        let (side, p) = vertex;
        let h = self
            .0
            .as_vertex_element(*side, &p.inverse().mul(edge))
            .ok_or_else(|| Error::Domain(format!("edge {edge}C is not incident to {p}{side:?}")))?;
        Ok((*side as usize, h))
    }
}

pub fn amalgam_local_order(spec: Arc<AmalgamSpec>) -> OrbitLocalOrder<AmalgamLinks> {
    let orders =
        vec![relative_order(spec.a.clone(), spec.c_a.clone()), relative_order(spec.b.clone(), spec.c_b.clone())];
    local_order_from_orbits(AmalgamLinks(spec), orders)
}

/// The associated order evaluated on the explicit tree path.
pub fn amalgam_tree_compare(spec: &Arc<AmalgamSpec>, u: &Word, v: &Word) -> Result<Sign> {
    associated_sign(&amalgam_tree_path(spec, u, v), &amalgam_local_order(spec.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::ball;
    use crate::edge::FactorSubgroup;
    use crate::free::{cayley_order, CayleyOrderConfig};
    use crate::order::FreeGroup;

    fn free(names: &[&str]) -> (Alphabet, Arc<dyn Group>) {
        let al = Alphabet::from_names(names).unwrap();
        (al.clone(), Arc::new(FreeGroup::new(al)))
    }

    fn factor(al: &Alphabet, gens: &[&str]) -> Arc<dyn EdgeSubgroup> {
        Arc::new(FactorSubgroup::new(al, gens.iter().map(|s| al.parse(s).unwrap()).collect()).unwrap())
    }

    fn free_product() -> Arc<AmalgamSpec> {
        let (aa, a) = free(&["a"]);
        let (ba, b) = free(&["b"]);
        let order = cayley_order(&CayleyOrderConfig::new(aa.clone()));
        Arc::new(AmalgamSpec::new(a, factor(&aa, &[]), b, factor(&ba, &[])).unwrap().with_left_order(order))
    }

    fn glued() -> Arc<AmalgamSpec> {
        let (aa, a) = free(&["a", "c"]);
        let (ba, b) = free(&["b", "cbar"]);
        Arc::new(AmalgamSpec::new(a, factor(&aa, &["c"]), b, factor(&ba, &["cbar"])).unwrap())
    }

    #[test]
    fn normal_forms() {
        let s = free_product();
        let nf = amalgam_normal_form(&s, &s.alphabet.parse("a b").unwrap()).unwrap();
        assert_eq!(nf.syllables.len(), 2);
        let g = glued();
        let p = |t| g.alphabet.parse(t).unwrap();
        let nf = amalgam_normal_form(&g, &p("c")).unwrap();
        assert!(nf.syllables.is_empty());
        assert_eq!(nf.c_part, p("c"));
        let nf = amalgam_normal_form(&g, &p("a c cbar^-1 b")).unwrap();
        assert_eq!(nf.syllables, vec![(Side::A, p("a")), (Side::B, p("b"))]);
        assert!(nf.c_part.is_empty());
    }

    // A *_{c = cbar} B with free vertex groups is F(a, b, c): substituting
    // cbar -> c solves the word problem independently.
    #[test]
    fn glued_normal_form_matches_substitution() {
        let g = glued();
        let c = g.alphabet.get("c").unwrap();
        let cbar = g.alphabet.get("cbar").unwrap();
        let image = |w: &Word| w.substitute(|x| (x == cbar).then(|| Word::letter(c.pos())));
        let b = ball(&FreeGroup::new(g.alphabet.clone()), 3);
        let mut seen = std::collections::HashMap::new();
        for w in &b {
            let n = g.normalize(w);
            assert_eq!(image(&n), image(w));
            assert_eq!(g.normalize(&n), n);
            if let Some(prev) = seen.insert(image(w), n.clone()) {
                assert_eq!(prev, n, "{w}");
            }
        }
    }

    #[test]
    fn vertex_compare_examples() {
        let s = free_product();
        let p = |t| s.alphabet.parse(t).unwrap();
        assert_eq!(amalgam_vertex_compare(&s, &Word::identity(), &p("a^3")), Sign::Zero);
        assert_eq!(amalgam_vertex_compare(&s, &Word::identity(), &p("b")), Sign::Pos);
        assert_eq!(amalgam_vertex_compare(&s, &Word::identity(), &p("b^-1 a b")), Sign::Pos);
        assert_eq!(amalgam_tree_compare(&s, &Word::identity(), &p("b^-1 a b")).unwrap(), Sign::Pos);
    }

    #[test]
    fn formula_matches_tree_path() {
        for s in [free_product(), glued()] {
            let b = ball(s.as_ref(), 3);
            for u in b.iter().step_by(7) {
                for v in b.iter().step_by(5) {
                    assert_eq!(amalgam_tree_compare(&s, u, v).unwrap(), amalgam_vertex_compare(&s, u, v), "{u} vs {v}");
                }
            }
        }
    }

    #[test]
    fn left_order_agrees_with_bottom_inside_a() {
        let s = free_product();
        let ord = left_order_on_amalgam(s.clone()).unwrap();
        let p = |t| s.alphabet.parse(t).unwrap();
        assert_eq!(ord.compare(&p("a"), &p("a^2")), Sign::Pos);
        assert_eq!(ord.compare(&p("a^2"), &p("a")), Sign::Neg);
        assert!(left_order_on_amalgam(glued()).is_err());
    }
}
