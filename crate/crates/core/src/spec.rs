//! JSON group descriptions and the orders they select.

use std::sync::Arc;

use serde::Deserialize;

use crate::amalgam::{
    amalgam_local_order, amalgam_tree_path, amalgam_vertex_order, left_order_on_amalgam, AmalgamSpec, Side,
};
use crate::burns_hale::local_coset_order;
use crate::edge::{EdgeSubgroup, FactorSubgroup};
use crate::error::{Error, Result};
use crate::free::{
    cayley_order, free_factor_order, left_order_on_free_group_via_factor, CayleyOrderConfig, FreeFactorSpec,
};
use crate::hnn::{hnn_local_order, hnn_tree_path, hnn_vertex_order, left_order_on_hnn, surface_hnn_spec, HnnSpec};
use crate::order::{FreeGroup, Group, Membership, OrderedCosetSpace};
use crate::raag::{
    hnn_decomposition, parabolic_membership, pivot, raag_left_order_with_convex, raag_parabolic_order, RaagParabolic,
    RaagSpec,
};
use crate::stallings::stallings_graph;
use crate::tree::{path_sums, PathSums};
use crate::words::{Alphabet, Generator, Word};

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpecDocument {
    Free {
        generators: Vec<String>,
        #[serde(default)]
        base_order: Option<Vec<String>>,
    },
    FreeFactor {
        generators: Vec<String>,
        factor: Vec<String>,
    },
    Amalgam {
        left: Box<GroupSpecDocument>,
        right: Box<GroupSpecDocument>,
        edge: EdgeDocument,
    },
    Hnn {
        vertex: Box<GroupSpecDocument>,
        #[serde(rename = "C")]
        c: Vec<String>,
        #[serde(rename = "D")]
        d: Vec<String>,
        #[serde(default)]
        map: Option<Vec<(String, String)>>,
        stable: String,
        #[serde(default)]
        iota_below_tau: Option<bool>,
    },
    Raag {
        generators: Vec<String>,
        #[serde(default)]
        commuting: Vec<(String, String)>,
        #[serde(default)]
        parabolic: Option<Vec<String>>,
    },
    Surface {
        #[serde(default = "default_stable")]
        x: String,
        y: String,
        epsilon: i8,
        z: Vec<String>,
        w: String,
    },
    BurnsHale {
        generators: Vec<String>,
        #[serde(rename = "C_root")]
        c_root: String,
        #[serde(rename = "X")]
        x: Vec<String>,
    },
}

fn default_stable() -> String {
    "x".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    #[serde(default)]
    pub left_gens: Option<Vec<String>>,
    #[serde(default)]
    pub right_gens: Option<Vec<String>>,
    #[serde(default)]
    pub map: Option<Vec<(String, String)>>,
}

type Tracer = Arc<dyn Fn(&Word, &Word) -> Result<PathSums> + Send + Sync>;
type SubgroupBuilder = Arc<dyn Fn(&[Word]) -> Result<Membership> + Send + Sync>;
type EdgeBuilder = Arc<dyn Fn(&[Word]) -> Result<Arc<dyn EdgeSubgroup>> + Send + Sync>;

/// A parsed description: the group, its orders, and helpers for subgroups.
#[derive(Clone)]
pub struct Construction {
    pub kind: &'static str,
    pub group: Arc<dyn Group>,
    /// A left order on the whole group, when the construction provides one.
    pub full: Option<OrderedCosetSpace>,
    /// The relative order on `G/G0`.
    pub cosets: OrderedCosetSpace,
    /// `G0`, convex under `full`.
    pub convex: Option<Membership>,
    /// Coset representatives for local certificates, which refuse anything else.
    pub universe: Option<Vec<Word>>,
    pub certificate: Option<String>,
    trace: Option<Tracer>,
    subgroups: SubgroupBuilder,
    edges: Option<EdgeBuilder>,
}

impl Construction {
    pub fn alphabet(&self) -> &Alphabet {
        self.group.alphabet()
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        self.alphabet().parse(text)
    }

    /// The order commands use: the full left order unless `cosets` is set
    /// or none exists.
    pub fn order(&self, cosets: bool) -> &OrderedCosetSpace {
        match (&self.full, cosets) {
            (Some(full), false) => full,
            _ => &self.cosets,
        }
    }

    /// Orientation-sum and turn-sum of the tree path behind the top order.
    pub fn trace(&self, u: &Word, v: &Word) -> Option<Result<PathSums>> {
        self.trace.as_ref().map(|t| t(u, v))
    }

    /// Membership in `<gens>`. Free groups accept any words; other groups
    /// accept the whole group or subgroups of one vertex group.
    pub fn subgroup(&self, gens: &[Word]) -> Result<Membership> {
        for g in gens {
            self.alphabet().check(g)?;
        }
        let all = self.alphabet().generators();
        if all.iter().all(|g| gens.iter().any(|w| w.len() == 1 && w.letters()[0].gen == *g)) {
            return Ok(Arc::new(|_: &Word| true));
        }
        (self.subgroups)(gens)
    }

    fn edge_subgroup(&self, gens: &[Word]) -> Result<Arc<dyn EdgeSubgroup>> {
        match &self.edges {
            Some(b) => b(gens),
            None => Err(Error::Spec(format!("{} groups cannot be vertex groups", self.kind))),
        }
    }

    fn left_order(&self) -> Result<OrderedCosetSpace> {
        self.full.clone().ok_or_else(|| Error::Spec(format!("{} vertex group has no left order", self.kind)))
    }
}

pub fn load_spec(text: &str) -> Result<Construction> {
    let doc: GroupSpecDocument = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
    build(&doc)
}

fn parse_all(al: &Alphabet, words: &[String]) -> Result<Vec<Word>> {
    words.iter().map(|w| al.parse(w)).collect()
}

fn single_letters(words: &[Word]) -> Result<Vec<Generator>> {
    words
        .iter()
        .map(|w| match w.letters() {
            [l] if l.exp > 0 => Ok(l.gen),
            _ => Err(Error::Spec(format!("raag subgroups are parabolic: `{w}` is not a generator"))),
        })
        .collect()
}

fn free_subgroups(al: Alphabet) -> SubgroupBuilder {
    Arc::new(move |gens: &[Word]| {
        let graph = stallings_graph(&al, gens)?;
        Ok(Arc::new(move |w: &Word| graph.contains(w)) as Membership)
    })
}

fn free_edges(al: Alphabet) -> EdgeBuilder {
    Arc::new(move |gens: &[Word]| Ok(Arc::new(FactorSubgroup::new(&al, gens.to_vec())?) as Arc<dyn EdgeSubgroup>))
}

/// Pairs edge generators either from an explicit map or positionally.
fn pair_edges(
    left: &Alphabet,
    right: &Alphabet,
    lgens: Option<&Vec<String>>,
    rgens: Option<&Vec<String>>,
    map: Option<&Vec<(String, String)>>,
) -> Result<(Vec<Word>, Vec<Word>)> {
    let listed = |gens: Option<&Vec<String>>, al: &Alphabet| gens.map(|g| parse_all(al, g)).transpose();
    let (l, r) = (listed(lgens, left)?, listed(rgens, right)?);
    let (ml, mr) = match map {
        Some(pairs) => {
            let ml = pairs.iter().map(|(a, _)| left.parse(a)).collect::<Result<Vec<_>>>()?;
            let mr = pairs.iter().map(|(_, b)| right.parse(b)).collect::<Result<Vec<_>>>()?;
            (Some(ml), Some(mr))
        }
        None => (None, None),
    };
    let pick = |listed: Option<Vec<Word>>, mapped: Option<Vec<Word>>, side: &str| match (listed, mapped) {
        (Some(a), Some(b)) if a != b => Err(Error::Spec(format!("{side} edge generators disagree with the edge map"))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Ok(Vec::new()),
    };
    let (l, r) = (pick(l, ml, "left")?, pick(r, mr, "right")?);
    if l.len() != r.len() {
        return Err(Error::Spec(format!("edge lists have lengths {} and {}", l.len(), r.len())));
    }
    Ok((l, r))
}

fn build(doc: &GroupSpecDocument) -> Result<Construction> {
    match doc {
        GroupSpecDocument::Free { generators, base_order } => {
            let al = Alphabet::from_names(generators)?;
            let cfg = match base_order {
                Some(tokens) => CayleyOrderConfig::parse_base_order(al.clone(), tokens)?,
                None => CayleyOrderConfig::new(al.clone()),
            };
            let order = cayley_order(&cfg);
            let c = cfg.clone();
            Ok(Construction {
                kind: "free",
                group: order.group().clone(),
                full: Some(order.clone()),
                cosets: order,
                convex: None,
                universe: None,
                certificate: None,
                trace: Some(Arc::new(move |u, v| Ok(c.sums(&u.inverse().mul(v))))),
                subgroups: free_subgroups(al.clone()),
                edges: Some(free_edges(al)),
            })
        }
        GroupSpecDocument::FreeFactor { generators, factor } => {
            let al = Alphabet::from_names(generators)?;
            let y = factor.iter().map(|n| al.get(n)).collect::<Result<Vec<_>>>()?;
            let spec = FreeFactorSpec::new(al.clone(), &y)?;
            let cosets = free_factor_order(&spec);
            let s = spec.clone();
            Ok(Construction {
                kind: "free-factor",
                group: cosets.group().clone(),
                full: Some(left_order_on_free_group_via_factor(&spec)),
                convex: Some(spec.factor_membership()),
                cosets,
                universe: None,
                certificate: None,
                trace: Some(Arc::new(move |u, v| {
                    Ok(PathSums { orientation: 0, turn: s.turn_sum(&u.inverse().mul(v)) })
                })),
                subgroups: free_subgroups(al.clone()),
                edges: Some(free_edges(al)),
            })
        }
        GroupSpecDocument::Amalgam { left, right, edge } => {
            let (l, r) = (build(left)?, build(right)?);
            let (lg, rg) = pair_edges(
                l.alphabet(),
                r.alphabet(),
                edge.left_gens.as_ref(),
                edge.right_gens.as_ref(),
                edge.map.as_ref(),
            )?;
            let spec =
                AmalgamSpec::new(l.group.clone(), l.edge_subgroup(&lg)?, r.group.clone(), r.edge_subgroup(&rg)?)?
                    .with_left_order(l.left_order()?);
            let spec = Arc::new(spec);
            let cosets = amalgam_vertex_order(spec.clone());
            let (s, t) = (spec.clone(), spec.clone());
            let local = amalgam_local_order(spec.clone());
            let local = Arc::new(local);
            let (lsub, rsub) = (l.subgroups.clone(), r.subgroups.clone());
            Ok(Construction {
                kind: "amalgam",
                group: spec.clone(),
                full: Some(left_order_on_amalgam(spec.clone())?),
                convex: Some(Arc::new(move |w: &Word| s.in_a(w))),
                cosets,
                universe: None,
                certificate: None,
                trace: Some(Arc::new(move |u, v| path_sums(&amalgam_tree_path(&t, u, v), local.as_ref()))),
                subgroups: Arc::new(move |gens: &[Word]| {
                    let side = match gens.first() {
                        None => return Ok(Arc::new(|w: &Word| w.is_empty()) as Membership),
                        Some(w) => w.generators().next().map_or(Side::A, |g| spec.side_of(g)),
                    };
                    if gens.iter().any(|w| w.generators().any(|g| spec.side_of(g) != side)) {
                        return Err(Error::Spec("subgroup generators must lie in one vertex group".into()));
                    }
                    let inner = match side {
                        Side::A => lsub(gens)?,
                        Side::B => rsub(gens)?,
                    };
                    let s = spec.clone();
                    Ok(Arc::new(move |w: &Word| s.as_vertex_element(side, w).is_some_and(|h| inner(&h))) as Membership)
                }),
                edges: None,
            })
        }
        GroupSpecDocument::Hnn { vertex, c, d, map, stable, iota_below_tau } => {
            let v = build(vertex)?;
            let (cg, dg) = pair_edges(v.alphabet(), v.alphabet(), Some(c), Some(d), map.as_ref())?;
            let spec =
                HnnSpec::new(v.group.clone(), v.edge_subgroup(&cg)?, v.edge_subgroup(&dg)?, Generator::new(stable)?)?
                    .with_left_order(v.left_order()?)
                    .with_iota_below_tau(iota_below_tau.unwrap_or(true));
            Ok(hnn_construction("hnn", Arc::new(spec), v.subgroups.clone()))
        }
        GroupSpecDocument::Surface { x, y, epsilon, z, w } => {
            let z = z.iter().map(|n| Generator::new(n)).collect::<Result<Vec<_>>>()?;
            let mut vertex = vec![Generator::new(y)?];
            vertex.extend(&z);
            let al = Alphabet::new(vertex)?;
            let w = al.parse(w)?;
            let spec = surface_hnn_spec(Generator::new(x)?, Generator::new(y)?, *epsilon, &z, &w)?;
            Ok(hnn_construction("surface", Arc::new(spec), free_subgroups(al)))
        }
        GroupSpecDocument::Raag { generators, commuting, parabolic } => {
            let al = Alphabet::from_names(generators)?;
            let pairs = commuting.iter().map(|(x, y)| Ok((al.get(x)?, al.get(y)?))).collect::<Result<Vec<_>>>()?;
            let spec = Arc::new(RaagSpec::new(al.clone(), &pairs)?);
            let y = match parabolic {
                Some(names) => names.iter().map(|n| al.get(n)).collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let full = raag_left_order_with_convex(spec.clone(), &y)?;
            let cosets = raag_parabolic_order(spec.clone(), &y)?;
            let trace: Option<Tracer> = match pivot(&spec, &y) {
                Some(x) => {
                    let h = Arc::new(hnn_decomposition(&spec, x)?);
                    let local = Arc::new(hnn_local_order(h.clone()));
                    Some(Arc::new(move |u, v| path_sums(&hnn_tree_path(&h, u, v), local.as_ref())))
                }
                None => None,
            };
            let (s1, s2) = (spec.clone(), spec.clone());
            Ok(Construction {
                kind: "raag",
                group: spec.clone(),
                full: Some(full),
                convex: Some(parabolic_membership(spec.clone(), y)),
                cosets,
                universe: None,
                certificate: None,
                trace,
                subgroups: Arc::new(move |gens: &[Word]| Ok(parabolic_membership(s1.clone(), single_letters(gens)?))),
                edges: Some(Arc::new(move |gens: &[Word]| {
                    Ok(Arc::new(RaagParabolic::new(s2.clone(), single_letters(gens)?)?) as Arc<dyn EdgeSubgroup>)
                })),
            })
        }
        GroupSpecDocument::BurnsHale { generators, c_root, x } => {
            let al = Alphabet::from_names(generators)?;
            let c = al.parse(c_root)?;
            let xs = parse_all(&al, x)?;
            let local = local_coset_order(&al, &c, &xs)?;
            let cosets = local.space();
            Ok(Construction {
                kind: "burns-hale",
                group: Arc::new(FreeGroup::new(al.clone())),
                full: None,
                convex: Some(cosets.subgroup().clone()),
                cosets,
                universe: Some(local.universe().to_vec()),
                certificate: Some(local.to_json()),
                trace: None,
                subgroups: free_subgroups(al),
                edges: None,
            })
        }
    }
}

fn hnn_construction(kind: &'static str, spec: Arc<HnnSpec>, vertex_subgroups: SubgroupBuilder) -> Construction {
    let cosets = hnn_vertex_order(spec.clone());
    let local = Arc::new(hnn_local_order(spec.clone()));
    let (s, t, m) = (spec.clone(), spec.clone(), spec.clone());
    let stable = spec.stable_letter();
    Construction {
        kind,
        group: spec.clone(),
        full: left_order_on_hnn(spec.clone()).ok(),
        convex: Some(Arc::new(move |w: &Word| s.in_a(w))),
        cosets,
        universe: None,
        certificate: None,
        trace: Some(Arc::new(move |u, v| path_sums(&hnn_tree_path(&t, u, v), local.as_ref()))),
        subgroups: Arc::new(move |gens: &[Word]| {
            if gens.iter().any(|w| w.generators().any(|g| g == stable)) {
                return Err(Error::Spec("subgroup generators must lie in the vertex group".into()));
            }
            let inner = vertex_subgroups(gens)?;
            let s = m.clone();
            Ok(Arc::new(move |w: &Word| s.as_vertex_element(w).is_some_and(|h| inner(&h))) as Membership)
        }),
        edges: None,
    }
}
