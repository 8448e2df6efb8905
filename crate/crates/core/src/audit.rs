//! Finite falsification of the order laws on a universe of elements.
//!
//! An audit can refute an order but never certify it on the whole (infinite)
//! coset space; the constructions elsewhere in the crate are the certificates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::order::{Membership, OrderedCosetSpace, Sign};
use crate::par::{self, Parallelism};
use crate::words::Word;

/// Witnesses kept per law; the count of all violations is always reported.
const MAX_WITNESSES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Trichotomy,
    Antisymmetry,
    Transitivity,
    LeftInvariance,
    CosetWellDefined,
    ConeClosure,
    Convexity,
    Domain,
}

impl Law {
    pub const ALL: [Law; 7] = [
        Law::Trichotomy,
        Law::Antisymmetry,
        Law::Transitivity,
        Law::LeftInvariance,
        Law::CosetWellDefined,
        Law::ConeClosure,
        Law::Convexity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Trichotomy => "trichotomy",
            Law::Antisymmetry => "antisymmetry",
            Law::Transitivity => "transitivity",
            Law::LeftInvariance => "left-invariance",
            Law::CosetWellDefined => "coset-well-defined",
            Law::ConeClosure => "cone-closure",
            Law::Convexity => "convexity",
            Law::Domain => "domain",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;
    fn from_str(s: &str) -> Result<Law> {
        Law::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| Error::Spec(format!("unknown law `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub witness: Vec<Word>,
}

impl Violation {
    fn weight(&self) -> usize {
        self.witness.iter().map(Word::len).sum()
    }
}

#[derive(Clone)]
pub struct AuditConfig {
    pub laws: Vec<Law>,
    pub triple_samples: usize,
    pub invariance_samples: usize,
    pub coset_samples: usize,
    pub cone_samples: usize,
    /// Rejection bound on `|g| + |u| + |v|` for left-invariance samples.
    pub max_total_len: Option<usize>,
    pub seed: u64,
    pub parallelism: Parallelism,
    /// Subgroup whose convexity is scanned when `Law::Convexity` is selected.
    pub convex_subgroup: Option<Membership>,
    /// Drop sampled checks whose queries leave the domain instead of
    /// reporting them; for local certificates on a finite universe.
    pub local: bool,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            laws: Law::ALL.to_vec(),
            triple_samples: 10_000,
            invariance_samples: 10_000,
            coset_samples: 2_000,
            cone_samples: 10_000,
            max_total_len: None,
            seed: 0,
            parallelism: Parallelism::default(),
            convex_subgroup: None,
            local: false,
        }
    }
}

impl AuditConfig {
    pub fn with_laws(mut self, laws: &[Law]) -> Self {
        self.laws = laws.to_vec();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.triple_samples = n;
        self.invariance_samples = n;
        self.coset_samples = n;
        self.cone_samples = n;
        self
    }

    pub fn with_convex_subgroup(mut self, h: Membership) -> Self {
        self.convex_subgroup = Some(h);
        self
    }

    pub fn local(mut self) -> Self {
        self.local = true;
        self
    }

    pub fn with_parallelism(mut self, p: Parallelism) -> Self {
        self.parallelism = p;
        self
    }

    fn wants(&self, law: Law) -> bool {
        self.laws.contains(&law)
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    pub violation_counts: BTreeMap<Law, usize>,
    pub checked: BTreeMap<Law, usize>,
    pub seed: u64,
    /// Every comparison on the universe returned `Zero` (`G0 = G`).
    pub trivial: bool,
}

impl AuditReport {
    pub fn is_lawful(&self) -> bool {
        self.violation_counts.values().all(|&c| c == 0)
    }

    pub fn count(&self, law: Law) -> usize {
        self.violation_counts.get(&law).copied().unwrap_or(0)
    }

    pub fn checked(&self, law: Law) -> usize {
        self.checked.get(&law).copied().unwrap_or(0)
    }

    fn record(&mut self, law: Law, checked: usize, mut found: Vec<Violation>) {
        *self.checked.entry(law).or_default() += checked;
        *self.violation_counts.entry(law).or_default() += found.len();
        found.sort_by(|a, b| {
            a.weight()
                .cmp(&b.weight())
                .then_with(|| a.witness.iter().map(|w| w.to_string()).cmp(b.witness.iter().map(|w| w.to_string())))
        });
        found.dedup();
        found.truncate(MAX_WITNESSES);
        self.violations.extend(found);
    }

    fn domain(&mut self, config: &AuditConfig, dom: Vec<Violation>) {
        if !config.local {
            self.record(Law::Domain, 0, dom);
        }
    }

    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "law": v.law.name(),
                    "witness": v.witness.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let checked: BTreeMap<&str, usize> = self.checked.iter().map(|(l, c)| (l.name(), *c)).collect();
        let counts: BTreeMap<&str, usize> = self.violation_counts.iter().map(|(l, c)| (l.name(), *c)).collect();
        json!({
            "violations": violations,
            "violation_counts": counts,
            "checked": checked,
            "seed": self.seed,
            "trivial": self.trivial,
        })
    }
}

fn domain(_: Error, witness: Vec<Word>) -> Violation {
    Violation { law: Law::Domain, witness }
}

/// Runs the selected law checks of `space` on `universe`.
///
/// Pairs are scanned exhaustively; triples, translates, coset shifts and
/// cone products are drawn with a seeded sampler, so the report is a pure
/// function of `(space, universe, config)`.
pub fn audit(space: &OrderedCosetSpace, universe: &[Word], config: &AuditConfig) -> AuditReport {
    let mut report = AuditReport { seed: config.seed, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mode = config.parallelism;
    let group = space.group().clone();
    let one = Word::identity();
    let n = universe.len();

    if config.wants(Law::Trichotomy) || config.wants(Law::Antisymmetry) {
        let rows: Vec<usize> = (0..n).collect();
        let results = par::map(&rows, mode, |&i| {
            let mut tri = Vec::new();
            let mut anti = Vec::new();
            let mut nonzero = 0usize;
            let mut errs = Vec::new();
            let x = &universe[i];
            for y in &universe[i..] {
                let (s, t) = match (space.try_compare(x, y), space.try_compare(y, x)) {
                    (Ok(s), Ok(t)) => (s, t),
                    (Err(e), _) | (_, Err(e)) => {
                        errs.push(domain(e, vec![x.clone(), y.clone()]));
                        continue;
                    }
                };
                if s != Sign::Zero {
                    nonzero += 1;
                }
                let same = space.in_subgroup(&group.quotient(x, y));
                if (s == Sign::Zero) != same || (t == Sign::Zero) != same {
                    tri.push(Violation { law: Law::Trichotomy, witness: vec![x.clone(), y.clone()] });
                }
                if s != -t {
                    anti.push(Violation { law: Law::Antisymmetry, witness: vec![x.clone(), y.clone()] });
                }
            }
            (tri, anti, nonzero, errs)
        });
        let ordered_pairs = n * n;
        let mut tri = Vec::new();
        let mut anti = Vec::new();
        let mut errs = Vec::new();
        let mut nonzero = 0;
        for (t, a, z, e) in results {
            tri.extend(t);
            anti.extend(a);
            errs.extend(e);
            nonzero += z;
        }
        report.trivial = n > 1 && nonzero == 0;
        if config.wants(Law::Trichotomy) {
            report.record(Law::Trichotomy, ordered_pairs, tri);
        }
        if config.wants(Law::Antisymmetry) {
            report.record(Law::Antisymmetry, ordered_pairs, anti);
        }
        report.record(Law::Domain, 0, errs);
    }

    if config.wants(Law::Transitivity) && n > 0 {
        let triples: Vec<[usize; 3]> =
            (0..config.triple_samples).map(|_| [pick(&mut rng, n), pick(&mut rng, n), pick(&mut rng, n)]).collect();
        let found = par::flat_map(&triples, mode, |&[i, j, k]| {
            let (x, y, z) = (&universe[i], &universe[j], &universe[k]);
            let r = (|| -> Result<bool> {
                Ok(space.try_compare(x, y)? == Sign::Pos
                    && space.try_compare(y, z)? == Sign::Pos
                    && space.try_compare(x, z)? != Sign::Pos)
            })();
            match r {
                Ok(true) => vec![Violation { law: Law::Transitivity, witness: vec![x.clone(), y.clone(), z.clone()] }],
                Ok(false) => vec![],
                Err(e) => vec![domain(e, vec![x.clone(), y.clone(), z.clone()])],
            }
        });
        let (dom, found): (Vec<_>, Vec<_>) = found.into_iter().partition(|v| v.law == Law::Domain);
        report.record(Law::Transitivity, triples.len() - dom.len(), found);
        report.domain(config, dom);
    }

    if config.wants(Law::LeftInvariance) && n > 0 {
        let mut triples = Vec::with_capacity(config.invariance_samples);
        let mut attempts = 0usize;
        while triples.len() < config.invariance_samples && attempts < 1000 * config.invariance_samples.max(1) {
            attempts += 1;
            let t = [pick(&mut rng, n), pick(&mut rng, n), pick(&mut rng, n)];
            let total: usize = t.iter().map(|&i| universe[i].len()).sum();
            if config.max_total_len.is_none_or(|m| total <= m) {
                triples.push(t);
            }
        }
        let found = par::flat_map(&triples, mode, |&[i, j, k]| {
            let (g, x, y) = (&universe[i], &universe[j], &universe[k]);
            let gx = group.mul(g, x);
            let gy = group.mul(g, y);
            match (space.try_compare(&gx, &gy), space.try_compare(x, y)) {
                (Ok(a), Ok(b)) if a == b => vec![],
                (Ok(_), Ok(_)) => {
                    vec![Violation { law: Law::LeftInvariance, witness: vec![g.clone(), x.clone(), y.clone()] }]
                }
                (Err(e), _) | (_, Err(e)) => vec![domain(e, vec![g.clone(), x.clone(), y.clone()])],
            }
        });
        let (dom, found): (Vec<_>, Vec<_>) = found.into_iter().partition(|v| v.law == Law::Domain);
        report.record(Law::LeftInvariance, triples.len() - dom.len(), found);
        report.domain(config, dom);
    }

    if config.wants(Law::CosetWellDefined) && n > 0 {
        let members: Vec<usize> = (0..n).filter(|&i| space.in_subgroup(&universe[i])).collect();
        let triples: Vec<[usize; 3]> = if members.len() > 1 {
            (0..config.coset_samples)
                .map(|_| [pick(&mut rng, n), pick(&mut rng, n), members[pick(&mut rng, members.len())]])
                .collect()
        } else {
            Vec::new()
        };
        let found = par::flat_map(&triples, mode, |&[i, j, k]| {
            let (x, y, h) = (&universe[i], &universe[j], &universe[k]);
            let xh = group.mul(x, h);
            let yh = group.mul(y, h);
            let r = (|| -> Result<bool> {
                let base = space.try_compare(x, y)?;
                Ok(space.try_compare(&xh, y)? != base || space.try_compare(x, &yh)? != base)
            })();
            match r {
                Ok(true) => {
                    vec![Violation { law: Law::CosetWellDefined, witness: vec![x.clone(), y.clone(), h.clone()] }]
                }
                Ok(false) => vec![],
                Err(e) => vec![domain(e, vec![x.clone(), y.clone(), h.clone()])],
            }
        });
        let (dom, found): (Vec<_>, Vec<_>) = found.into_iter().partition(|v| v.law == Law::Domain);
        report.record(Law::CosetWellDefined, triples.len() - dom.len(), found);
        report.domain(config, dom);
    }

    if config.wants(Law::ConeClosure) && n > 0 {
        let positive: Vec<usize> =
            (0..n).filter(|&i| matches!(space.try_compare(&one, &universe[i]), Ok(Sign::Pos))).collect();
        let pairs: Vec<[usize; 2]> = if positive.is_empty() {
            Vec::new()
        } else {
            (0..config.cone_samples)
                .map(|_| [positive[pick(&mut rng, positive.len())], positive[pick(&mut rng, positive.len())]])
                .collect()
        };
        let found = par::flat_map(&pairs, mode, |&[i, j]| {
            let (g, h) = (&universe[i], &universe[j]);
            match space.try_compare(&one, &group.mul(g, h)) {
                Ok(Sign::Pos) => vec![],
                Ok(_) => vec![Violation { law: Law::ConeClosure, witness: vec![g.clone(), h.clone()] }],
                Err(e) => vec![domain(e, vec![g.clone(), h.clone()])],
            }
        });
        let (dom, found): (Vec<_>, Vec<_>) = found.into_iter().partition(|v| v.law == Law::Domain);
        report.record(Law::ConeClosure, pairs.len() - dom.len(), found);
        report.domain(config, dom);
    }

    if config.wants(Law::Convexity) {
        if let Some(h) = &config.convex_subgroup {
            let (r, checked) = convexity_scan(space, universe, h, mode);
            report.record(Law::Convexity, checked, r);
        }
    }

    report.violation_counts.retain(|l, c| *c > 0 || *l != Law::Domain);
    report.checked.retain(|l, _| *l != Law::Domain);
    report
}

fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..n)
}

/// Finds every `g` outside `H` that fits strictly between two elements of
/// `H` in the universe. Returns witnesses `(h1, g, h2)` and the number of
/// outside elements scanned.
pub fn convexity_scan(
    space: &OrderedCosetSpace,
    universe: &[Word],
    h: &Membership,
    mode: Parallelism,
) -> (Vec<Violation>, usize) {
    let inside: Vec<&Word> = universe.iter().filter(|w| h(w)).collect();
    let outside: Vec<&Word> = universe.iter().filter(|w| !h(w)).collect();
    let found = par::flat_map(&outside, mode, |g| {
        let below = inside.iter().find(|x| space.try_compare(x, g).ok() == Some(Sign::Pos));
        let above = inside.iter().find(|y| space.try_compare(g, y).ok() == Some(Sign::Pos));
        match (below, above) {
            (Some(a), Some(b)) => {
                vec![Violation { law: Law::Convexity, witness: vec![(*a).clone(), (*g).clone(), (*b).clone()] }]
            }
            _ => vec![],
        }
    });
    (found, outside.len())
}
