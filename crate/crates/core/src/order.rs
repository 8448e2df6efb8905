//! Invariant orders on coset spaces `G/G0`, positive cones, and the
//! top/bottom composition of orders along a chain `K <= H <= G`.

use std::fmt;
use std::ops::Neg;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// Sign of a comparison: `x < y` is `Pos`, equality is `Zero`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Neg = -1,
    Zero = 0,
    Pos = 1,
}

impl Sign {
    pub fn of(v: i64) -> Sign {
        match v.signum() {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        }
    }

    pub fn value(self) -> i64 {
        self as i64
    }

    /// The comparison symbol for `x ? y`.
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Pos => "<",
            Sign::Zero => "=",
            Sign::Neg => ">",
        }
    }

    pub fn to_ordering(self) -> std::cmp::Ordering {
        match self {
            Sign::Pos => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Neg => std::cmp::Ordering::Greater,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::of(-self.value())
    }
}

/// A finitely generated group with a solved word problem.
pub trait Group: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    /// Canonical representative: two words give the same output iff they
    /// represent the same element.
    fn normalize(&self, w: &Word) -> Word;

    fn mul(&self, u: &Word, v: &Word) -> Word {
        self.normalize(&u.mul(v))
    }

    fn inv(&self, u: &Word) -> Word {
        self.normalize(&u.inverse())
    }

    /// `u^-1 v`, normalized.
    fn quotient(&self, u: &Word, v: &Word) -> Word {
        self.normalize(&u.inverse().mul(v))
    }

    fn is_identity(&self, w: &Word) -> bool {
        self.normalize(w).is_empty()
    }
}

/// The free group on an alphabet.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    alphabet: Alphabet,
}

impl FreeGroup {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeGroup { alphabet }
    }
}

impl Group for FreeGroup {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn normalize(&self, w: &Word) -> Word {
        w.clone()
    }
}

pub type Membership = Arc<dyn Fn(&Word) -> bool + Send + Sync>;
type Comparator = Arc<dyn Fn(&Word, &Word) -> Result<Sign> + Send + Sync>;

/// A comparator certificate for a `G`-invariant order on `G/G0`.
#[derive(Clone)]
pub struct OrderedCosetSpace {
    group: Arc<dyn Group>,
    subgroup: Membership,
    cmp: Comparator,
}

impl OrderedCosetSpace {
    pub fn from_compare<F>(group: Arc<dyn Group>, subgroup: Membership, cmp: F) -> Self
    where
        F: Fn(&Word, &Word) -> Result<Sign> + Send + Sync + 'static,
    {
        OrderedCosetSpace { group, subgroup, cmp: Arc::new(cmp) }
    }

    /// Builds a left-invariant order from the sign of `G0` against `gG0`.
    pub fn from_base_sign<F>(group: Arc<dyn Group>, subgroup: Membership, sign: F) -> Self
    where
        F: Fn(&Word) -> Result<Sign> + Send + Sync + 'static,
    {
        let g = group.clone();
        Self::from_compare(group, subgroup, move |x, y| sign(&g.quotient(x, y)))
    }

    /// The order with `G0 = G`: every comparison is `Zero`.
    pub fn trivial(group: Arc<dyn Group>) -> Self {
        Self::from_compare(group, Arc::new(|_| true), |_, _| Ok(Sign::Zero))
    }

    pub fn group(&self) -> &Arc<dyn Group> {
        &self.group
    }

    pub fn subgroup(&self) -> &Membership {
        &self.subgroup
    }

    pub fn in_subgroup(&self, g: &Word) -> bool {
        (self.subgroup)(g)
    }

    pub fn same_coset(&self, x: &Word, y: &Word) -> bool {
        self.in_subgroup(&self.group.quotient(x, y))
    }

    pub fn try_compare(&self, x: &Word, y: &Word) -> Result<Sign> {
        (self.cmp)(x, y)
    }

    /// `sign(xG0, <, yG0)`. Panics on a domain error; use `try_compare` for
    /// local certificates that refuse out-of-universe queries.
    pub fn compare(&self, x: &Word, y: &Word) -> Sign {
        self.try_compare(x, y).unwrap_or_else(|e| panic!("comparison of {x} and {y}: {e}"))
    }

    /// Same order, but comparing `x` against `y` returns the flipped sign for
    /// exactly one ordered pair. Used to plant violations in audits.
    pub fn corrupted(&self, x: Word, y: Word) -> Self {
        let inner = self.cmp.clone();
        Self::from_compare(self.group.clone(), self.subgroup.clone(), move |u, v| {
            let s = inner(u, v)?;
            Ok(if *u == x && *v == y { -s } else { s })
        })
    }
}

impl fmt::Debug for OrderedCosetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrderedCosetSpace").field("alphabet", self.group.alphabet()).finish_non_exhaustive()
    }
}

/// The positive cone `G+ = { g | G0 < gG0 }` of an order.
#[derive(Clone)]
pub struct PositiveCone {
    group: Arc<dyn Group>,
    subgroup: Membership,
    member: Membership,
}

impl PositiveCone {
    pub fn new(group: Arc<dyn Group>, subgroup: Membership, member: Membership) -> Self {
        PositiveCone { group, subgroup, member }
    }

    pub fn contains(&self, g: &Word) -> bool {
        (self.member)(g)
    }

    pub fn group(&self) -> &Arc<dyn Group> {
        &self.group
    }
}

pub fn cone_from_order(space: &OrderedCosetSpace) -> PositiveCone {
    let s = space.clone();
    PositiveCone {
        group: space.group.clone(),
        subgroup: space.subgroup.clone(),
        member: Arc::new(move |g| s.compare(&Word::identity(), g) == Sign::Pos),
    }
}

/// `xG0 < yG0` iff `x^-1 y` is in the cone.
pub fn order_from_cone(cone: &PositiveCone) -> OrderedCosetSpace {
    let member = cone.member.clone();
    let sub = cone.subgroup.clone();
    OrderedCosetSpace::from_base_sign(cone.group.clone(), cone.subgroup.clone(), move |g| {
        Ok(if sub(g) {
            Sign::Zero
        } else if member(g) {
            Sign::Pos
        } else {
            Sign::Neg
        })
    })
}

/// A `G`-order on `G/H` together with an `H`-order on `H/K`.
#[derive(Clone, Debug)]
pub struct SubgroupChainOrder {
    pub top: OrderedCosetSpace,
    pub bottom: OrderedCosetSpace,
}

impl SubgroupChainOrder {
    pub fn new(top: OrderedCosetSpace, bottom: OrderedCosetSpace) -> Self {
        SubgroupChainOrder { top, bottom }
    }
}

/// `xK < yK` iff `xH <top yH`, or `xH = yH` and `K <bottom x^-1 y K`.
/// `H/K` is convex in `G/K` under the result.
pub fn compose(chain: &SubgroupChainOrder) -> OrderedCosetSpace {
    let top = chain.top.clone();
    let bottom = chain.bottom.clone();
    let group = top.group.clone();
    OrderedCosetSpace::from_compare(group.clone(), bottom.subgroup.clone(), move |x, y| {
        match top.try_compare(x, y)? {
            Sign::Zero => bottom.try_compare(&Word::identity(), &group.quotient(x, y)),
            s => Ok(s),
        }
    })
}

/// The induced order on `G/H`; meaningful when `H/K` is convex in `G/K`.
pub fn extract_top(space: &OrderedCosetSpace, h_member: Membership) -> OrderedCosetSpace {
    let s = space.clone();
    let h = h_member.clone();
    OrderedCosetSpace::from_compare(space.group.clone(), h_member, move |x, y| {
        if h(&s.group.quotient(x, y)) {
            Ok(Sign::Zero)
        } else {
            s.try_compare(x, y)
        }
    })
}

/// The restriction of the order to `H/K`; non-`H` arguments are refused.
pub fn extract_bottom(space: &OrderedCosetSpace, h_member: Membership) -> OrderedCosetSpace {
    let s = space.clone();
    OrderedCosetSpace::from_compare(space.group.clone(), space.subgroup.clone(), move |x, y| {
        for w in [x, y] {
            if !h_member(w) {
                return Err(Error::Domain(format!("{w} is not in the bottom subgroup")));
            }
        }
        s.try_compare(x, y)
    })
}
