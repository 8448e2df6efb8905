//! The associated order of a local order on a tree.
//!
//! For a reduced path `v0 -e1^s1-> v1 -> ... -> vn` the sign of `v0` against
//! `vn` is the sign of the orientation-sum `sum s_i` plus the turn-sum
//! `sum sign(e_i <_{v_i} e_{i+1})`. Trees are never materialized: callers
//! build the path from a normal form and supply the link comparisons.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::order::{OrderedCosetSpace, Sign};
use crate::words::Word;

/// One oriented step of a tree path, together with the vertex it reaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep<V, E> {
    pub edge: E,
    pub orientation: i8,
    pub to: V,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePath<V, E> {
    pub start: V,
    pub steps: Vec<PathStep<V, E>>,
}

impl<V: Clone, E: Clone> TreePath<V, E> {
    pub fn new(start: V) -> Self {
        TreePath { start, steps: Vec::new() }
    }

    pub fn push(&mut self, edge: E, orientation: i8, to: V) {
        self.steps.push(PathStep { edge, orientation, to });
    }

    pub fn end(&self) -> &V {
        self.steps.last().map(|s| &s.to).unwrap_or(&self.start)
    }

    /// The same path walked backwards.
    pub fn reversed(&self) -> Self {
        let mut out = TreePath::new(self.end().clone());
        let n = self.steps.len();
        for i in (0..n).rev() {
            let to = if i == 0 { self.start.clone() } else { self.steps[i - 1].to.clone() };
            out.push(self.steps[i].edge.clone(), -self.steps[i].orientation, to);
        }
        out
    }
}

/// A family of orders on the vertex links of a tree.
pub trait LocalOrder<V, E> {
    /// Compares two edges of `link(vertex)`.
    fn compare_link(&self, vertex: &V, a: &E, b: &E) -> Result<Sign>;
}

/// Orientation-sum and turn-sum of a reduced path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PathSums {
    pub orientation: i64,
    pub turn: i64,
}

impl PathSums {
    pub fn sign(&self) -> Sign {
        Sign::of(self.orientation + self.turn)
    }
}

pub fn path_sums<V, E, L>(path: &TreePath<V, E>, local: &L) -> Result<PathSums>
where
    E: PartialEq,
    L: LocalOrder<V, E> + ?Sized,
{
    let steps = &path.steps;
    for (i, w) in steps.windows(2).enumerate() {
        if w[0].edge == w[1].edge && w[0].orientation == -w[1].orientation {
            return Err(Error::NonReducedPath(i + 1));
        }
    }
    let mut sums = PathSums::default();
    for (i, step) in steps.iter().enumerate() {
        sums.orientation += step.orientation as i64;
        if let Some(next) = steps.get(i + 1) {
            sums.turn += local.compare_link(&step.to, &step.edge, &next.edge)?.value();
        }
    }
    Ok(sums)
}

/// `sign(v0, <_T, vn)` for the associated order. Empty paths give `Zero`.
pub fn associated_sign<V, E, L>(path: &TreePath<V, E>, local: &L) -> Result<Sign>
where
    E: PartialEq,
    L: LocalOrder<V, E> + ?Sized,
{
    path_sums(path, local).map(|s| s.sign())
}

/// Locates a link edge relative to the chosen orbit representatives: for
/// `vertex = g v0` and `edge = g h e_k` with `h` in the stabilizer of `v0`,
/// returns `(k, h)`.
pub trait LinkLocator<V, E>: Send + Sync {
    fn locate(&self, vertex: &V, edge: &E) -> Result<(usize, Word)>;
}

/// The invariant local order built from per-orbit data: link edges in
/// different orbits compare by orbit position, edges in the same orbit by
/// the supplied order on `G_v0 / G_e` of their stabilizer coordinates.
pub struct OrbitLocalOrder<Loc> {
    locator: Loc,
    orbit_orders: Vec<OrderedCosetSpace>,
}

impl<Loc> OrbitLocalOrder<Loc> {
    pub fn new(locator: Loc, orbit_orders: Vec<OrderedCosetSpace>) -> Self {
        OrbitLocalOrder { locator, orbit_orders }
    }
}

/// Builds the local order from one order per edge orbit.
pub fn local_order_from_orbits<Loc>(locator: Loc, orbit_orders: Vec<OrderedCosetSpace>) -> OrbitLocalOrder<Loc> {
    OrbitLocalOrder::new(locator, orbit_orders)
}

impl<V, E: Debug, Loc: LinkLocator<V, E>> LocalOrder<V, E> for OrbitLocalOrder<Loc> {
    fn compare_link(&self, vertex: &V, a: &E, b: &E) -> Result<Sign> {
        let (ka, ha) = self.locator.locate(vertex, a)?;
        let (kb, hb) = self.locator.locate(vertex, b)?;
        for k in [ka, kb] {
            if k >= self.orbit_orders.len() {
                return Err(Error::UnknownOrbit(format!("orbit {k} for edge {a:?}/{b:?}")));
            }
        }
        if ka != kb {
            return Ok(Sign::of(kb as i64 - ka as i64));
        }
        self.orbit_orders[ka].try_compare(&ha, &hb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // A line Z with vertices n and edges (n, n+1); link order "left edge < right edge".
    struct Line;
    impl LocalOrder<i64, (i64, i64)> for Line {
        fn compare_link(&self, v: &i64, a: &(i64, i64), b: &(i64, i64)) -> Result<Sign> {
            let side = |e: &(i64, i64)| if e.0 == *v { 1 } else { 0 };
            Ok(Sign::of(side(b) - side(a)))
        }
    }

    fn line_path(from: i64, to: i64) -> TreePath<i64, (i64, i64)> {
        let mut p = TreePath::new(from);
        let mut v = from;
        while v != to {
            if to > v {
                p.push((v, v + 1), 1, v + 1);
                v += 1;
            } else {
                p.push((v - 1, v), -1, v - 1);
                v -= 1;
            }
        }
        p
    }

    #[test]
    fn empty_path_is_zero() {
        assert_eq!(associated_sign(&TreePath::<i64, (i64, i64)>::new(0), &Line).unwrap(), Sign::Zero);
    }

    #[test]
    fn line_order_matches_integers() {
        for a in -3..=3 {
            for b in -3..=3 {
                let s = associated_sign(&line_path(a, b), &Line).unwrap();
                assert_eq!(s, Sign::of(b - a));
                assert_eq!(associated_sign(&line_path(a, b).reversed(), &Line).unwrap(), -s);
            }
        }
    }

    #[test]
    fn backtracking_is_refused() {
        let mut p = TreePath::new(0i64);
        p.push((0, 1), 1, 1);
        p.push((0, 1), -1, 0);
        assert_eq!(associated_sign(&p, &Line), Err(Error::NonReducedPath(1)));
    }
}
