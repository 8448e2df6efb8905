//! HNN extensions `A *_C x` with `x^-1 c x = c^x`: Britton normal forms,
//! the order on `G/A` from the Bass–Serre tree, and the surface-group
//! builder.

use std::fmt;
use std::sync::Arc;

use crate::edge::{relative_order, transfer, EdgeSubgroup, FactorSubgroup};
use crate::error::{Error, Result};
use crate::free::{cayley_order, CayleyOrderConfig};
use crate::order::{compose, FreeGroup, Group, OrderedCosetSpace, Sign, SubgroupChainOrder};
use crate::tree::{associated_sign, local_order_from_orbits, LinkLocator, OrbitLocalOrder, TreePath};
use crate::words::{Alphabet, Generator, Word};

/// A vertex group `A` with marked subgroups `C` and `D = C^x`, identified
/// through their shared basis, and a stable letter `x`.
#[derive(Clone)]
pub struct HnnSpec {
    alphabet: Alphabet,
    stable: Generator,
    a: Arc<dyn Group>,
    c: Arc<dyn EdgeSubgroup>,
    d: Arc<dyn EdgeSubgroup>,
    order_a: Option<OrderedCosetSpace>,
    iota_below_tau: bool,
}

impl HnnSpec {
    pub fn new(
        a: Arc<dyn Group>,
        c: Arc<dyn EdgeSubgroup>,
        d: Arc<dyn EdgeSubgroup>,
        stable: Generator,
    ) -> Result<Self> {
        if c.rank() != d.rank() {
            return Err(Error::Spec(format!("C has rank {} but D has rank {}", c.rank(), d.rank())));
        }
        if a.alphabet().contains(stable) {
            return Err(Error::Spec(format!("stable letter `{stable}` is a vertex generator")));
        }
        let mut gens = a.alphabet().generators().to_vec();
        gens.push(stable);
        Ok(HnnSpec { alphabet: Alphabet::new(gens)?, stable, a, c, d, order_a: None, iota_below_tau: true })
    }

    pub fn with_left_order(mut self, order_a: OrderedCosetSpace) -> Self {
        self.order_a = Some(order_a);
        self
    }

    /// Orbit order at a vertex: outgoing edges (`A/C` copy) below incoming
    /// ones (`A/D` copy) when true.
    pub fn with_iota_below_tau(mut self, below: bool) -> Self {
        self.iota_below_tau = below;
        self
    }

    pub fn stable_letter(&self) -> Generator {
        self.stable
    }

    pub fn vertex_group(&self) -> &Arc<dyn Group> {
        &self.a
    }

    pub fn c(&self) -> &Arc<dyn EdgeSubgroup> {
        &self.c
    }

    pub fn d(&self) -> &Arc<dyn EdgeSubgroup> {
        &self.d
    }

    /// `c -> c^x = x^-1 c x`.
    pub fn edge_map(&self, c: &Word) -> Word {
        transfer(self.c.as_ref(), self.d.as_ref(), c)
    }

    pub fn edge_map_inv(&self, d: &Word) -> Word {
        transfer(self.d.as_ref(), self.c.as_ref(), d)
    }

    fn normal_form(&self, w: &Word) -> BrittonNormalForm {
        let mut head: Vec<(Word, i8)> = Vec::new();
        let mut tail = Word::identity();
        for (is_x, syl) in w.syllables(|g| g == self.stable) {
            if !is_x {
                tail = self.a.normalize(&tail.mul(&syl));
                continue;
            }
            for l in syl.letters() {
                let eps = l.exp;
                let pinch = match head.last() {
                    Some((_, -1)) if eps == 1 && self.c.contains(&tail) => Some(self.edge_map(&tail)),
                    Some((_, 1)) if eps == -1 && self.d.contains(&tail) => Some(self.edge_map_inv(&tail)),
                    _ => None,
                };
                if let Some(moved) = pinch {
                    let (r, _) = head.pop().unwrap();
                    tail = self.a.normalize(&r.mul(&moved));
                } else if eps == 1 {
                    let (r, c) = self.c.transversal(&tail);
                    head.push((r, 1));
                    tail = self.edge_map(&c);
                } else {
                    let (r, d) = self.d.transversal(&tail);
                    head.push((r, -1));
                    tail = self.edge_map_inv(&d);
                }
            }
        }
        BrittonNormalForm { stable: self.stable, head, tail }
    }

    pub fn in_a(&self, g: &Word) -> bool {
        self.normal_form(g).head.is_empty()
    }

    /// `g` as an element of `A`, if it lies there.
    pub fn as_vertex_element(&self, g: &Word) -> Option<Word> {
        let nf = self.normal_form(g);
        nf.head.is_empty().then_some(nf.tail)
    }
}

impl Group for HnnSpec {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn normalize(&self, w: &Word) -> Word {
        self.normal_form(w).to_word()
    }
}

impl fmt::Debug for HnnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HnnSpec")
            .field("a", self.a.alphabet())
            .field("stable", &self.stable)
            .field("c", &self.c.generators())
            .field("d", &self.d.generators())
            .finish_non_exhaustive()
    }
}

/// `a0 x^e1 a1 ... x^en an`, stored as the pairs `(a_{i-1}, e_i)` and the
/// final `a_n`. Each `a_{i-1}` is a transversal representative for `A/C`
/// when `e_i = +1` and for `A/D` when `e_i = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrittonNormalForm {
    pub stable: Generator,
    pub head: Vec<(Word, i8)>,
    pub tail: Word,
}

impl BrittonNormalForm {
    pub fn to_word(&self) -> Word {
        let mut out = Word::identity();
        for (r, e) in &self.head {
            let x = if *e > 0 { self.stable.pos() } else { self.stable.neg() };
            out = out.mul(r).mul(&Word::letter(x));
        }
        out.mul(&self.tail)
    }

    pub fn is_identity(&self) -> bool {
        self.head.is_empty() && self.tail.is_empty()
    }
}

impl fmt::Display for BrittonNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, e) in &self.head {
            write!(f, "[{r}] {}^{e} ", self.stable)?;
        }
        write!(f, "[{}]", self.tail)
    }
}

pub fn britton_normal_form(spec: &HnnSpec, g: &Word) -> Result<BrittonNormalForm> {
    spec.alphabet.check(g)?;
    Ok(spec.normal_form(g))
}

/// Tree vertices `gA` and edges `gC`, keyed by canonical representatives.
fn vertex_key(spec: &HnnSpec, p: &Word) -> Word {
    let mut nf = spec.normal_form(p);
    nf.tail = Word::identity();
    nf.to_word()
}

fn edge_key(spec: &HnnSpec, p: &Word) -> Word {
    let mut nf = spec.normal_form(p);
    nf.tail = spec.c.transversal(&nf.tail).0;
    nf.to_word()
}

/// The reduced path from `uA` to `vA`; the edge `pC` runs `pA -> pxA`.
pub fn hnn_tree_path(spec: &HnnSpec, u: &Word, v: &Word) -> TreePath<Word, Word> {
    let g = spec.normal_form(&u.inverse().mul(v));
    let x = Word::letter(spec.stable.pos());
    let mut path = TreePath::new(vertex_key(spec, u));
    let mut p = spec.normalize(u);
    for (r, e) in &g.head {
        p = spec.normalize(&p.mul(r));
        if *e > 0 {
            let next = spec.normalize(&p.mul(&x));
            path.push(edge_key(spec, &p), 1, vertex_key(spec, &next));
            p = next;
        } else {
            p = spec.normalize(&p.mul(&x.inverse()));
            path.push(edge_key(spec, &p), -1, vertex_key(spec, &p));
        }
    }
    path
}

/// At `pA`, the edge `eC` is outgoing (`p^-1 e` in `A`, coordinate in `A/C`)
/// or incoming (`p^-1 e x` in `A`, coordinate in `A/D`).
pub struct HnnLinks(pub Arc<HnnSpec>);

impl HnnLinks {
    fn orbit(&self, incoming: bool) -> usize {
        (incoming == self.0.iota_below_tau) as usize
    }
}

impl LinkLocator<Word, Word> for HnnLinks {
    fn locate(&self, vertex: &Word, edge: &Word) -> Result<(usize, Word)> {
        let s = &self.0;
        let rel = vertex.inverse().mul(edge);
        if let Some(h) = s.as_vertex_element(&rel) {
            return Ok((self.orbit(false), h));
        }
        if let Some(h) = s.as_vertex_element(&rel.mul(&Word::letter(s.stable.pos()))) {
            return Ok((self.orbit(true), h));
        }
        Err(Error::Domain(format!("edge {edge}C is not incident to {vertex}A")))
    }
}

pub fn hnn_local_order(spec: Arc<HnnSpec>) -> OrbitLocalOrder<HnnLinks> {
    let mut orders =
        vec![relative_order(spec.a.clone(), spec.c.clone()), relative_order(spec.a.clone(), spec.d.clone())];
    if !spec.iota_below_tau {
        orders.reverse();
    }
    local_order_from_orbits(HnnLinks(spec), orders)
}

/// `sign(uA, <, vA)` by the associated order of the tree path.
pub fn hnn_vertex_compare(spec: &Arc<HnnSpec>, u: &Word, v: &Word) -> Result<Sign> {
    associated_sign(&hnn_tree_path(spec, u, v), &hnn_local_order(spec.clone()))
}

/// The order on `G/A` as a coset space.
pub fn hnn_vertex_order(spec: Arc<HnnSpec>) -> OrderedCosetSpace {
    let member = spec.clone();
    let s = spec.clone();
    let local = hnn_local_order(spec.clone());
    OrderedCosetSpace::from_compare(spec, Arc::new(move |g: &Word| member.in_a(g)), move |u, v| {
        associated_sign(&hnn_tree_path(&s, u, v), &local)
    })
}

/// Left order on `G` with `A` convex; needs a left order on `A`.
pub fn left_order_on_hnn(spec: Arc<HnnSpec>) -> Result<OrderedCosetSpace> {
    let bottom =
        spec.order_a.clone().ok_or_else(|| Error::Precondition("no left order on the vertex group A".into()))?;
    let composed = compose(&SubgroupChainOrder::new(hnn_vertex_order(spec.clone()), bottom));
    let g = spec.clone();
    Ok(OrderedCosetSpace::from_compare(spec, Arc::new(move |w: &Word| g.is_identity(w)), move |x, y| {
        composed.try_compare(x, y)
    }))
}

/// The splitting of `<x, y, Z | x^-1 y^eps x y w>` as an HNN extension of
/// `A = F({y} u Z)` with `C = <y>` and `y^x = (y w)^-eps`.
pub fn surface_hnn_spec(x: Generator, y: Generator, eps: i8, z: &[Generator], w: &Word) -> Result<HnnSpec> {
    if eps != 1 && eps != -1 {
        return Err(Error::Spec(format!("epsilon must be +1 or -1, got {eps}")));
    }
    if let Some(bad) = w.generators().find(|&g| g == x || g == y || !z.contains(&g)) {
        return Err(Error::Spec(format!("relator tail uses `{bad}`, which is not in Z")));
    }
    let mut gens = vec![y];
    gens.extend_from_slice(z);
    let al = Alphabet::new(gens)?;
    let a: Arc<dyn Group> = Arc::new(FreeGroup::new(al.clone()));
    let yw = Word::letter(y.pos()).mul(w).pow(-eps as i64);
    let c = Arc::new(FactorSubgroup::new(&al, vec![Word::letter(y.pos())])?);
    let d = Arc::new(FactorSubgroup::new(&al, vec![yw])?);
    let order = cayley_order(&CayleyOrderConfig::new(al));
    Ok(HnnSpec::new(a, c, d, x)?.with_left_order(order))
}

/// `x^-1 y^eps x y w`.
pub fn surface_relator(x: Generator, y: Generator, eps: i8, w: &Word) -> Word {
    let (xw, yw) = (Word::letter(x.pos()), Word::letter(y.pos()));
    xw.inverse().mul(&yw.pow(eps as i64)).mul(&xw).mul(&yw).mul(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::ball;
    use crate::order::FreeGroup;

    fn gen(n: &str) -> Generator {
        Generator::new(n).unwrap()
    }

    fn z2() -> Arc<HnnSpec> {
        let al = Alphabet::from_names(&["a"]).unwrap();
        let a: Arc<dyn Group> = Arc::new(FreeGroup::new(al.clone()));
        let c = Arc::new(FactorSubgroup::new(&al, vec![al.parse("a").unwrap()]).unwrap());
        let order = cayley_order(&CayleyOrderConfig::new(al));
        Arc::new(HnnSpec::new(a, c.clone(), c, gen("x")).unwrap().with_left_order(order))
    }

    fn a_to_b() -> Arc<HnnSpec> {
        let al = Alphabet::from_names(&["a", "b"]).unwrap();
        let a: Arc<dyn Group> = Arc::new(FreeGroup::new(al.clone()));
        let c = Arc::new(FactorSubgroup::new(&al, vec![al.parse("a").unwrap()]).unwrap());
        let d = Arc::new(FactorSubgroup::new(&al, vec![al.parse("b").unwrap()]).unwrap());
        Arc::new(HnnSpec::new(a, c, d, gen("x")).unwrap())
    }

    fn no_pinch(nf: &BrittonNormalForm, s: &HnnSpec) -> bool {
        nf.head.windows(2).all(|w| match (w[0].1, w[1].1) {
            (-1, 1) => !s.c.contains(&w[1].0),
            (1, -1) => !s.d.contains(&w[1].0),
            _ => true,
        })
    }

    #[test]
    fn britton_examples() {
        let s = z2();
        let p = |t| s.alphabet.parse(t).unwrap();
        assert_eq!(s.normalize(&p("x^-1 a x")), p("a"));
        assert_eq!(s.normalize(&p("x a x^-1")), p("a"));
        let t = a_to_b();
        let q = |w| t.alphabet.parse(w).unwrap();
        assert_eq!(t.normalize(&q("x^-1 a^2 x b^-1")), q("b"));
    }

    // Z^2 is abelian: normal forms agree exactly when exponent sums agree.
    #[test]
    fn z2_normal_form_matches_abelianization() {
        let s = z2();
        let (a, x) = (gen("a"), gen("x"));
        let key = |w: &Word| {
            let count = |g| w.letters().iter().filter(|l| l.gen == g).map(|l| l.exp as i64).sum::<i64>();
            (count(a), count(x))
        };
        let b = ball(&FreeGroup::new(s.alphabet.clone()), 5);
        let mut seen = std::collections::HashMap::new();
        for w in &b {
            let n = britton_normal_form(&s, w).unwrap();
            assert!(no_pinch(&n, &s));
            assert_eq!(key(&n.to_word()), key(w));
            if let Some(prev) = seen.insert(key(w), n.clone()) {
                assert_eq!(prev, n);
            }
        }
        assert_eq!(seen.len(), 61);
    }

    // <a, b, x | x^-1 a x = b> is free on a, x via b -> x^-1 a x.
    #[test]
    fn a_to_b_matches_elimination() {
        let s = a_to_b();
        let (a, b, x) = (gen("a"), gen("b"), gen("x"));
        let xa = Word::letter(x.neg()).mul(&Word::letter(a.pos())).mul(&Word::letter(x.pos()));
        let image = |w: &Word| w.substitute(|g| (g == b).then(|| xa.clone()));
        let mut seen = std::collections::HashMap::new();
        for w in &ball(&FreeGroup::new(s.alphabet.clone()), 4) {
            let n = s.normal_form(w);
            assert!(no_pinch(&n, &s));
            assert_eq!(image(&n.to_word()), image(w));
            assert_eq!(s.normalize(&n.to_word()), n.to_word());
            if let Some(prev) = seen.insert(image(w), n.clone()) {
                assert_eq!(prev, n, "{w}");
            }
        }
    }

    #[test]
    fn vertex_compare_examples() {
        let s = z2();
        let p = |t| s.alphabet.parse(t).unwrap();
        let one = Word::identity();
        assert_eq!(hnn_vertex_compare(&s, &one, &p("a")).unwrap(), Sign::Zero);
        assert_eq!(hnn_vertex_compare(&s, &one, &p("x")).unwrap(), Sign::Pos);
        assert_eq!(hnn_vertex_compare(&s, &one, &p("x^-1")).unwrap(), Sign::Neg);
        assert_eq!(hnn_vertex_compare(&s, &p("a x"), &p("x^2 a^-3")).unwrap(), Sign::Pos);
    }

    // Closed form of the turn-sum from the Britton form.
    fn formula(s: &HnnSpec, g: &Word) -> Sign {
        let nf = s.normal_form(g);
        let mut total: i64 = nf.head.iter().map(|(_, e)| *e as i64).sum();
        for i in 1..nf.head.len() {
            let (prev, (r, e)) = (nf.head[i - 1].1, &nf.head[i]);
            total += match (prev, *e) {
                (1, 1) => -1,
                (-1, -1) => 1,
                (1, -1) => s.d.relative_sign(r).value(),
                _ => s.c.relative_sign(r).value(),
            };
        }
        Sign::of(total)
    }

    #[test]
    fn tree_path_matches_closed_form() {
        for s in [z2(), a_to_b()] {
            for g in ball(s.as_ref(), 4) {
                assert_eq!(hnn_vertex_compare(&s, &Word::identity(), &g).unwrap(), formula(&s, &g), "{g}");
            }
        }
    }

    #[test]
    fn surface_relator_collapses() {
        let (x, y, z1, z2) = (gen("x"), gen("y"), gen("z1"), gen("z2"));
        let w = Word::letter(z1.pos()).commutator(&Word::letter(z2.pos()));
        for eps in [1, -1] {
            let s = surface_hnn_spec(x, y, eps, &[z1, z2], &w).unwrap();
            let rel = surface_relator(x, y, eps, &w);
            assert!(britton_normal_form(&s, &rel).unwrap().is_identity());
            assert!(s.is_identity(&rel.inverse()));
            assert!(!s.is_identity(&w));
        }
        let s = surface_hnn_spec(x, y, 1, &[z1, z2], &w).unwrap();
        assert_eq!(s.edge_map(&Word::letter(y.pos())), Word::letter(y.pos()).mul(&w).inverse());
        let small = surface_hnn_spec(x, y, 1, &[z1], &Word::identity()).unwrap();
        assert!(small.is_identity(&surface_relator(x, y, 1, &Word::identity())));
        assert!(surface_hnn_spec(x, y, 1, &[z1], &Word::letter(y.pos())).is_err());
        assert!(surface_hnn_spec(x, y, 1, &[z1], &Word::letter(x.pos())).is_err());
    }
}
