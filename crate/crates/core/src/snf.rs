//! Smith normal form over the integers and surjections onto `Z` killing a
//! list of subgroup elements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stallings::{stallings_graph, StallingsGraph};
use crate::words::{Alphabet, Word};

/// `U M V = diag(d_1, ..., d_rank, 0, ...)` with `d_i | d_{i+1}`; only the
/// column transform `V` is kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub diagonal: Vec<i64>,
    pub v: Vec<Vec<i64>>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.v.iter().map(|row| row[j]).collect()
    }
}

fn swap_cols(m: &mut [Vec<i64>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// col_j -= q col_i
fn sub_col(m: &mut [Vec<i64>], i: usize, j: usize, q: i64) {
    for row in m.iter_mut() {
        row[j] -= q * row[i];
    }
}

/// Pivot rule: the smallest-magnitude nonzero entry of the remaining block,
/// leftmost column first, then topmost row.
pub fn smith(matrix: &[Vec<i64>], cols: usize) -> Smith {
    let mut m: Vec<Vec<i64>> = matrix.to_vec();
    let rows = m.len();
    let mut v: Vec<Vec<i64>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i64).collect()).collect();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for j in t..cols {
            for (i, row) in m.iter().enumerate().skip(t) {
                if row[j] != 0 && pivot.is_none_or(|(pi, pj)| row[j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);
        let p = m[t][t];
        let mut clean = true;
        for j in t + 1..cols {
            let q = m[t][j].div_euclid(p);
            sub_col(&mut m, t, j, q);
            sub_col(&mut v, t, j, q);
            clean &= m[t][j] == 0;
        }
        for i in t + 1..rows {
            let q = m[i][t].div_euclid(p);
            let pivot_row = m[t].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                *x -= q * y;
            }
            clean &= m[i][t] == 0;
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any entry not divisible by the pivot into row t.
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0)) {
            let row = m[i].clone();
            for (x, y) in m[t].iter_mut().zip(&row) {
                *x += y;
            }
            continue;
        }
        if p < 0 {
            for row in m.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
        t += 1;
    }
    Smith { diagonal: (0..t).map(|i| m[i][i]).collect(), v }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A homomorphism `<basis> -> Z`, given by its values on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZLinearMap {
    #[serde(serialize_with = "crate::snf::words_as_strings")]
    pub basis: Vec<Word>,
    pub phi: Vec<i64>,
}

pub(crate) fn words_as_strings<S: serde::Serializer>(w: &[Word], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(w.iter().map(|w| w.to_string()))
}

/// `phi` together with the graph that evaluates it.
#[derive(Clone, Debug)]
pub struct Surjection {
    pub map: ZLinearMap,
    pub graph: StallingsGraph,
}

impl Surjection {
    /// `phi(g)`, or `None` when `g` is outside the subgroup.
    pub fn eval(&self, g: &Word) -> Option<i64> {
        let v = self.graph.abelianize(g)?;
        Some(v.iter().zip(&self.map.phi).map(|(a, b)| a * b).sum())
    }
}

/// A surjection `<h_gens> -> Z` vanishing on `kill`, or `None` when the
/// abelianized quotient is finite. Coordinates refer to the Stallings basis
/// of `<h_gens>`; the first nonzero value of `phi` is positive.
pub fn quotient_onto_z(alphabet: &Alphabet, h_gens: &[Word], kill: &[Word]) -> Result<Option<Surjection>> {
    let graph = stallings_graph(alphabet, h_gens)?;
    let r = graph.rank();
    let mut rows = Vec::new();
    for k in kill {
        let row = graph
            .abelianize(k)
            .ok_or_else(|| Error::Domain(format!("{k} is not in the subgroup to be mapped onto Z")))?;
        rows.push(row);
    }
    let s = smith(&rows, r);
    if s.rank() == r {
        return Ok(None);
    }
    let mut phi = s.column(s.rank());
    if phi.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        phi.iter_mut().for_each(|x| *x = -*x);
    }
    assert!(rows.iter().all(|row| row.iter().zip(&phi).map(|(a, b)| a * b).sum::<i64>() == 0), "phi(kill) != 0");
    assert_eq!(phi.iter().fold(0, |g, &x| gcd(g, x)), 1, "phi is not onto Z");
    Ok(Some(Surjection { map: ZLinearMap { basis: graph.basis(), phi }, graph }))
}
