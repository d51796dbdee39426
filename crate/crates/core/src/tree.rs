//! Order structure of the valuative tree.

use std::fmt;

use crate::error::{Error, Result};
use crate::family::{family_equiv, Family};
use crate::node::{Node, NodeKind};
use crate::poly::Poly;
use crate::value_group::{sme_equiv, GroupElem};

/// Answer of a check that may be inconclusive within its bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "true",
            TriState::No => "false",
            TriState::Unknown => "unknown",
        })
    }
}

/// `mu <= nu`, decided from the construction of `mu`:
/// `w_{a,d} <= nu` iff `nu(x - a) >= d`, and `[base; phi, g] <= nu` iff
/// `base <= nu` and `nu(phi) >= g`. For a limit node the base condition
/// holds when `nu` is itself built over the same family, and is otherwise
/// checked on the last generated member.
pub fn leq(mu: &Node, nu: &Node) -> Result<bool> {
    if nu.lim_depth() > 0 && !matches!(mu.kind(), NodeKind::Root) && below_limit_ancestor(mu, nu)? {
        return Ok(true);
    }
    match mu.kind() {
        NodeKind::Root => Ok(true),
        NodeKind::DepthZero { a, delta } => Ok(nu.eval(&Poly::x_minus(a.clone()))? >= *delta),
        NodeKind::Ordinary { parent, phi, gamma } => Ok(nu.eval(phi)? >= *gamma && leq(parent, nu)?),
        NodeKind::Limit { family, phi, gamma } => {
            Ok(nu.eval(phi)? >= *gamma && (built_over(family, nu)? || leq(&family.last()?, nu)?))
        }
    }
}

/// Whether `nu` is a limit augmentation of `family` or lies on top of one
/// in its construction; such a node exceeds every member.
fn built_over(family: &Family, nu: &Node) -> Result<bool> {
    for n in nu.ancestors()? {
        if let NodeKind::Limit { family: f, .. } = n.kind() {
            if f == family {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Whether `mu` lies below the last member of a family that `nu` is built over.
fn below_limit_ancestor(mu: &Node, nu: &Node) -> Result<bool> {
    for n in nu.ancestors()? {
        if let NodeKind::Limit { family, .. } = n.kind() {
            let last = family.last()?;
            if last.lim_depth() < mu.lim_depth() {
                continue;
            }
            if leq(mu, &last)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Equality as valuations.
pub fn node_eq(mu: &Node, nu: &Node) -> Result<bool> {
    Ok(leq(mu, nu)? && leq(nu, mu)?)
}

/// Strict order.
pub fn lt(mu: &Node, nu: &Node) -> Result<bool> {
    Ok(leq(mu, nu)? && !leq(nu, mu)?)
}

/// Greatest common lower node `mu ^ nu`.
///
/// Walks the construction of `mu` from the root and stops at the first node
/// not below `nu`; the meet lies on the segment that node closes.
pub fn gcln(mu: &Node, nu: &Node) -> Result<Node> {
    if leq(mu, nu)? {
        return Ok(mu.clone());
    }
    if leq(nu, mu)? {
        return Ok(nu.clone());
    }
    for m in mu.ancestors()? {
        if leq(&m, nu)? {
            continue;
        }
        return meet_on_segment(&m, nu);
    }
    unreachable!("mu itself is not below nu")
}

/// Meet of `m` and `nu` when `m`'s construction parent lies below `nu` but `m` does not.
fn meet_on_segment(m: &Node, nu: &Node) -> Result<Node> {
    let ground = m.ground();
    match m.kind() {
        NodeKind::Root => unreachable!("the root lies below every node"),
        NodeKind::DepthZero { a, .. } => {
            let d = nu.eval(&Poly::x_minus(a.clone()))?;
            if d <= GroupElem::minus_infinity(ground.rank()) {
                Ok(Node::root(ground))
            } else {
                Node::depth_zero(ground, a.clone(), d)
            }
        }
        NodeKind::Ordinary { parent, phi, .. } => {
            let g = nu.eval(phi)?;
            if g > parent.eval(phi)? {
                Ok(Node::ordinary_unchecked(parent, phi.clone(), g))
            } else {
                Ok(parent.clone())
            }
        }
        NodeKind::Limit { family, phi, .. } => {
            let members = family.members()?;
            for r in &members {
                if !leq(r, nu)? {
                    return gcln(r, nu);
                }
            }
            let g = nu.eval(phi)?;
            let top = members.iter().map(|r| r.eval(phi)).collect::<Result<Vec<_>>>()?;
            if top.iter().all(|v| g > *v) {
                family.limit_augment(phi, g)
            } else {
                Err(Error::StabilityHorizon { tried: members.len() })
            }
        }
    }
}

/// Representative of the tangent direction `t(mu, nu)` for `mu < nu`.
pub fn tangent_direction(mu: &Node, nu: &Node) -> Result<Poly> {
    if !lt(mu, nu)? {
        return Err(Error::Precondition(format!("{mu} is not strictly below {nu}")));
    }
    tangent_unchecked(mu, nu)
}

fn tangent_unchecked(mu: &Node, nu: &Node) -> Result<Poly> {
    for n in nu.ancestors()? {
        if leq(&n, mu)? {
            continue;
        }
        return match n.kind() {
            NodeKind::Root => unreachable!("the root lies below every node"),
            NodeKind::DepthZero { .. } | NodeKind::Ordinary { .. } => Ok(n.key_poly()),
            NodeKind::Limit { family, phi, .. } => {
                for r in family.members()? {
                    if !leq(&r, mu)? {
                        return tangent_unchecked(mu, &r);
                    }
                }
                Ok(phi.clone())
            }
        };
    }
    unreachable!("nu is not below mu")
}

/// The node `[m; t, m(t) + eps]` one infinitesimal step from `m` toward
/// `target` along `t = t(m, target)`. The infinitesimal takes the slot below
/// every value used by `m` and the `context` nodes.
pub fn probe_toward(m: &Node, target: &Node, context: &[&Node]) -> Result<Node> {
    let t = tangent_direction(m, target)?;
    let slot = context.iter().map(|n| n.max_slot()).chain([m.max_slot(), target.max_slot()]).max().unwrap_or(1) + 1;
    if slot >= m.rank() {
        return Err(Error::RankExhausted { rank: m.rank() });
    }
    let g = &m.eval(&t)? + &GroupElem::unit(slot, m.rank());
    Ok(Node::ordinary_unchecked(m, t, g))
}

/// Tree distance `sv(mu) + sv(nu) - 2 sv(mu ^ nu)`.
pub fn tree_distance(mu: &Node, nu: &Node) -> Result<GroupElem> {
    if mu.is_leaf() || nu.is_leaf() {
        return Err(Error::Domain("tree distance is defined on inner nodes only".into()));
    }
    let m = gcln(mu, nu)?;
    mu.sv().checked_add(nu.sv())?.sub(&m.sv().times(2))
}

/// `[mu; phi, gamma] = [mu; phi*, gamma*]` iff `gamma = gamma*` and `mu(phi* - phi) >= gamma`.
pub fn augmentations_equal(mu: &Node, phi: &Poly, gamma: &GroupElem, phi_star: &Poly, gamma_star: &GroupElem) -> Result<bool> {
    if phi.degree() != phi_star.degree() || gamma != gamma_star {
        return Ok(false);
    }
    Ok(mu.eval(&(phi_star - phi))? >= *gamma)
}

/// A constant-depth path segment `{[base; phi, g] : low < g <= high}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathInterval {
    pub base: Node,
    pub phi: Poly,
    pub low: GroupElem,
    pub high: GroupElem,
}

impl PathInterval {
    pub fn contains(&self, g: &GroupElem) -> bool {
        *g > self.low && *g <= self.high
    }

    /// The node closing the interval.
    pub fn top(&self) -> Node {
        Node::ordinary_unchecked(&self.base, self.phi.clone(), self.high.clone())
    }
}

/// Intersection of the paths of `phi` and `phi*` out of `mu`:
/// `(mu(phi), mu(phi - phi*)]` when the difference value exceeds `mu(phi)`,
/// empty otherwise.
pub fn path_intersection(mu: &Node, phi: &Poly, phi_star: &Poly) -> Result<Option<PathInterval>> {
    if phi.degree() != phi_star.degree() {
        return Ok(None);
    }
    let low = mu.eval(phi)?;
    let g0 = mu.eval(&(phi - phi_star))?;
    if g0 > low {
        Ok(Some(PathInterval { base: mu.clone(), phi: phi.clone(), low, high: g0 }))
    } else {
        Ok(None)
    }
}

/// Certificate of an equivalence check.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivReport {
    pub result: TriState,
    pub common_key: TriState,
    pub same_base: TriState,
    pub sme: TriState,
}

/// Equivalence of two inner nodes: a common key polynomial of minimal
/// degree, equal action below that degree, and sme-equivalent singular
/// values.
pub fn equiv_nodes(mu: &Node, nu: &Node) -> Result<EquivReport> {
    if mu.is_leaf() || nu.is_leaf() {
        return Err(Error::Domain("equivalence is tested on inner nodes".into()));
    }
    if mu.degree() != nu.degree() {
        let no = TriState::No;
        return Ok(EquivReport { result: no, common_key: no, same_base: TriState::Unknown, sme: TriState::Unknown });
    }
    let (pm, pn) = (mu.key_poly(), nu.key_poly());
    let common_key = match (mu.kind(), nu.kind()) {
        (NodeKind::Root, NodeKind::Root) => true,
        (NodeKind::Root, _) | (_, NodeKind::Root) => false,
        _ => {
            let d = &pn - &pm;
            mu.eval(&d)? >= *mu.sv() && nu.eval(&d)? >= *nu.sv()
        }
    };
    let same_base = base_agrees(mu, nu)?;
    let sme = match (mu.sv().is_infinite(), nu.sv().is_infinite()) {
        (false, false) => sme_equiv(mu.sv(), nu.sv())?,
        _ => false,
    };
    let common_key = TriState::from_bool(common_key);
    let sme = TriState::from_bool(sme);
    let result = if common_key == TriState::No || sme == TriState::No || same_base == TriState::No {
        TriState::No
    } else if same_base == TriState::Unknown {
        TriState::Unknown
    } else {
        TriState::Yes
    };
    Ok(EquivReport { result, common_key, same_base, sme })
}

/// Whether the two nodes act identically on polynomials of degree below
/// their common degree.
fn base_agrees(mu: &Node, nu: &Node) -> Result<TriState> {
    let lower = |n: &Node| -> Result<Option<Node>> {
        Ok(match n.kind() {
            NodeKind::Root | NodeKind::DepthZero { .. } => None,
            NodeKind::Ordinary { parent, .. } => Some(strong_base(parent, n.degree())),
            NodeKind::Limit { .. } => None,
        })
    };
    if mu.degree() == 1 {
        return Ok(TriState::Yes);
    }
    match (mu.kind(), nu.kind()) {
        (NodeKind::Limit { family: a, .. }, NodeKind::Limit { family: b, .. }) => {
            if a == b {
                return Ok(TriState::Yes);
            }
            return family_equiv(a, b);
        }
        (NodeKind::Limit { .. }, _) | (_, NodeKind::Limit { .. }) => return sample_agreement(mu, nu),
        _ => {}
    }
    match (lower(mu)?, lower(nu)?) {
        (Some(a), Some(b)) if node_eq(&a, &b)? => Ok(TriState::Yes),
        _ => sample_agreement(mu, nu),
    }
}

/// The construction ancestor that governs polynomials of degree below `deg`.
fn strong_base(n: &Node, deg: usize) -> Node {
    let mut cur = n.clone();
    loop {
        let next = match cur.kind() {
            NodeKind::Ordinary { parent, .. } if cur.degree() == deg => parent.clone(),
            _ => return cur,
        };
        cur = next;
    }
}

/// Bounded sample of polynomials of degree below `deg(mu)`: disagreement
/// proves inequivalence, agreement is inconclusive.
fn sample_agreement(mu: &Node, nu: &Node) -> Result<TriState> {
    let ground = mu.ground();
    let d = mu.degree();
    for k in 0..d {
        for j in 0..4 {
            for shift in [0i64, 1, -1] {
                let mut f = Poly::monomial(crate::rational::rat(1), k);
                if k > 0 {
                    f = &f + &Poly::constant(ground.p_pow(j) * crate::rational::rat(shift));
                }
                if f.is_zero() {
                    continue;
                }
                if mu.eval(&f)? != nu.eval(&f)? {
                    return Ok(TriState::No);
                }
            }
        }
    }
    Ok(TriState::Unknown)
}
