//! Folded core graphs of finitely generated subgroups of free groups.

use std::collections::{HashMap, VecDeque};

use crate::error::Result;
use crate::words::{Alphabet, Generator, Letter, Word};

/// Edge `source --gen--> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub gen: Generator,
    pub target: usize,
}

/// Folded core graph with base vertex 0. Vertices are numbered in BFS order
/// from the base and edges are sorted, so the graph of a subgroup does not
/// depend on how its generators were listed.
#[derive(Clone, Debug)]
pub struct StallingsGraph {
    alphabet: Alphabet,
    vertices: usize,
    edges: Vec<Edge>,
    out: Vec<HashMap<Generator, usize>>,
    inc: Vec<HashMap<Generator, usize>>,
    tree_label: Vec<Word>,
    basis_edges: Vec<usize>,
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

pub fn stallings_graph(alphabet: &Alphabet, generators: &[Word]) -> Result<StallingsGraph> {
    let mut n = 1;
    let mut raw: Vec<Edge> = Vec::new();
    for w in generators {
        alphabet.check(w)?;
        let mut at = 0;
        for (i, l) in w.letters().iter().enumerate() {
            let next = if i + 1 == w.len() {
                0
            } else {
                n += 1;
                n - 1
            };
            raw.push(if l.exp > 0 {
                Edge { source: at, gen: l.gen, target: next }
            } else {
                Edge { source: next, gen: l.gen, target: at }
            });
            at = next;
        }
    }

    // Fold until no vertex has two same-label edges in the same direction.
    let mut parent: Vec<usize> = (0..n).collect();
    loop {
        let mut merged = false;
        let mut out: HashMap<(usize, Generator), usize> = HashMap::new();
        let mut inc: HashMap<(usize, Generator), usize> = HashMap::new();
        for e in &raw {
            let (s, t) = (find(&mut parent, e.source), find(&mut parent, e.target));
            if let Some(&t2) = out.get(&(s, e.gen)) {
                let t2 = find(&mut parent, t2);
                if t2 != t {
                    let (lo, hi) = (t.min(t2), t.max(t2));
                    parent[hi] = lo;
                    merged = true;
                }
            } else {
                out.insert((s, e.gen), t);
            }
            let t = find(&mut parent, t);
            if let Some(&s2) = inc.get(&(t, e.gen)) {
                let s2 = find(&mut parent, s2);
                let s = find(&mut parent, s);
                if s2 != s {
                    let (lo, hi) = (s.min(s2), s.max(s2));
                    parent[hi] = lo;
                    merged = true;
                }
            } else {
                inc.insert((t, e.gen), s);
            }
        }
        if !merged {
            break;
        }
    }
    let mut edges: Vec<Edge> = raw
        .iter()
        .map(|e| Edge { source: find(&mut parent, e.source), gen: e.gen, target: find(&mut parent, e.target) })
        .collect();
    edges.sort_by_key(|e| (e.source, alphabet.position(e.gen), e.target));
    edges.dedup();

    // Trim hanging trees: drop non-base vertices of degree one.
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for e in &edges {
            *degree.entry(e.source).or_default() += 1;
            *degree.entry(e.target).or_default() += 1;
        }
        let before = edges.len();
        edges.retain(|e| {
            let leaf = |v: usize| v != 0 && degree[&v] == 1;
            !leaf(e.source) && !leaf(e.target)
        });
        if edges.len() == before {
            break;
        }
    }
    Ok(StallingsGraph::relabel(alphabet.clone(), edges))
}

impl StallingsGraph {
    fn relabel(alphabet: Alphabet, edges: Vec<Edge>) -> Self {
        let mut adj: HashMap<usize, Vec<(Letter, usize)>> = HashMap::new();
        for e in &edges {
            adj.entry(e.source).or_default().push((e.gen.pos(), e.target));
            adj.entry(e.target).or_default().push((e.gen.neg(), e.source));
        }
        for v in adj.values_mut() {
            v.sort_by_key(|(l, t)| (alphabet.position(l.gen), l.exp < 0, *t));
        }
        let mut id: HashMap<usize, usize> = HashMap::from([(0, 0)]);
        let mut tree_label = vec![Word::identity()];
        let mut tree_edges: Vec<(usize, usize, Letter)> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(l, t) in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if let std::collections::hash_map::Entry::Vacant(e) = id.entry(t) {
                    e.insert(tree_label.len());
                    tree_label.push(tree_label[id[&v]].mul(&Word::letter(l)));
                    tree_edges.push((id[&v], id[&t], l));
                    queue.push_back(t);
                }
            }
        }
        let vertices = tree_label.len();
        let mut edges: Vec<Edge> =
            edges.iter().map(|e| Edge { source: id[&e.source], gen: e.gen, target: id[&e.target] }).collect();
        edges.sort_by_key(|e| (e.source, alphabet.position(e.gen), e.target));
        let mut out = vec![HashMap::new(); vertices];
        let mut inc = vec![HashMap::new(); vertices];
        for e in &edges {
            out[e.source].insert(e.gen, e.target);
            inc[e.target].insert(e.gen, e.source);
        }
        let in_tree = |e: &Edge| {
            tree_edges.iter().any(|&(p, c, l)| {
                (l.exp > 0 && p == e.source && c == e.target && l.gen == e.gen)
                    || (l.exp < 0 && c == e.source && p == e.target && l.gen == e.gen)
            })
        };
        let basis_edges = (0..edges.len()).filter(|&i| !in_tree(&edges[i])).collect();
        StallingsGraph { alphabet, vertices, edges, out, inc, tree_label, basis_edges }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rank(&self) -> usize {
        self.basis_edges.len()
    }

    /// Follows `w` from the base, recording non-tree edges crossed.
    fn trace(&self, w: &Word) -> Option<(usize, Vec<(usize, i8)>)> {
        let mut at = 0;
        let mut crossed = Vec::new();
        for l in w.letters() {
            let (next, edge) = if l.exp > 0 {
                let t = *self.out[at].get(&l.gen)?;
                (t, Edge { source: at, gen: l.gen, target: t })
            } else {
                let s = *self.inc[at].get(&l.gen)?;
                (s, Edge { source: s, gen: l.gen, target: at })
            };
            if let Some(k) = self.basis_edges.iter().position(|&i| self.edges[i] == edge) {
                crossed.push((k, l.exp));
            }
            at = next;
        }
        Some((at, crossed))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(w).is_some_and(|(end, _)| end == 0)
    }

    /// The free basis read off the BFS spanning tree, one element per
    /// non-tree edge.
    pub fn basis(&self) -> Vec<Word> {
        self.basis_edges
            .iter()
            .map(|&i| {
                let e = self.edges[i];
                self.tree_label[e.source].mul(&Word::letter(e.gen.pos())).mul(&self.tree_label[e.target].inverse())
            })
            .collect()
    }

    /// `w` as a word in [`basis`](Self::basis), if `w` is in the subgroup.
    pub fn basis_word(&self, w: &Word) -> Option<Vec<(usize, i8)>> {
        match self.trace(w) {
            Some((0, crossed)) => Some(crossed),
            _ => None,
        }
    }

    /// Image of `w` in the abelianization `Z^rank`.
    pub fn abelianize(&self, w: &Word) -> Option<Vec<i64>> {
        let mut v = vec![0; self.rank()];
        for (k, e) in self.basis_word(w)? {
            v[k] += e as i64;
        }
        Some(v)
    }
}

pub fn membership(g: &Word, graph: &StallingsGraph) -> bool {
    graph.contains(g)
}

pub fn subgroup_basis(graph: &StallingsGraph) -> Vec<Word> {
    graph.basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ab() -> Alphabet {
        Alphabet::from_names(&["a", "b"]).unwrap()
    }

    /// Every reduced product of at most `n` generator letters.
    pub(crate) fn enumerate(gens: &[Word], n: usize) -> HashSet<Word> {
        let mut letters: Vec<Word> = gens.to_vec();
        letters.extend(gens.iter().map(Word::inverse));
        let mut frontier = vec![Word::identity()];
        let mut all: HashSet<Word> = frontier.iter().cloned().collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &frontier {
                for l in &letters {
                    let p = w.mul(l);
                    if all.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        all
    }

    #[test]
    fn examples() {
        let al = ab();
        let p = |s| al.parse(s).unwrap();
        let g = stallings_graph(&al, &[p("a")]).unwrap();
        assert_eq!((g.vertex_count(), g.edges().len()), (1, 1));
        let g = stallings_graph(&al, &[p("a^2"), p("a b")]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.rank(), 2);
        assert!(!membership(&p("a"), &g));
        assert!(membership(&p("a b a b"), &g));
        assert!(membership(&Word::identity(), &g));
        let e = stallings_graph(&al, &[]).unwrap();
        assert_eq!((e.vertex_count(), e.rank()), (1, 0));
        assert!(membership(&Word::identity(), &e) && !membership(&p("a"), &e));
    }

    #[test]
    fn folding_trims_and_basis_words_round_trip() {
        let al = ab();
        let p = |s| al.parse(s).unwrap();
        let gens = [p("a b a^-1"), p("a b^2 a^-1"), p("b a b^-1")];
        let g = stallings_graph(&al, &gens).unwrap();
        assert_eq!(g.rank(), 2);
        let basis = g.basis();
        for w in enumerate(&gens, 4) {
            let coords = g.basis_word(&w).expect("member");
            let rebuilt = coords.iter().fold(Word::identity(), |acc, &(k, e)| {
                acc.mul(&if e > 0 { basis[k].clone() } else { basis[k].inverse() })
            });
            assert_eq!(rebuilt, w);
        }
    }
}
