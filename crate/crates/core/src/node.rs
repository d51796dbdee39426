//! Valuation nodes on K[x] and their evaluation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{Family, Stability};
use crate::poly::{GroundValuation, Poly};
use crate::rational::{fmt_rat, Rat};
use crate::value_group::{GroupElem, Index, Subgroup, MAIN};

/// The defining data of a node.
#[derive(Clone, Debug)]
pub enum NodeKind {
    /// The minimal node `w_{-oo}`: `f -> (-deg f | v(lc f) | 0)`.
    Root,
    /// `w_{a,delta}`: minimum of `v(a_s) + s*delta` over the `(x-a)`-expansion.
    DepthZero { a: Rat, delta: GroupElem },
    /// Ordinary augmentation `[parent; phi, gamma]`.
    Ordinary { parent: Node, phi: Poly, gamma: GroupElem },
    /// Limit augmentation `[family; phi, gamma]`.
    Limit { family: Family, phi: Poly, gamma: GroupElem },
}

#[derive(Debug)]
struct Inner {
    kind: NodeKind,
    ground: GroundValuation,
    degree: usize,
    sv: GroupElem,
    max_slot: usize,
}

/// A valuation on K[x]. Cheap to clone; immutable.
#[derive(Clone, Debug)]
pub struct Node(Arc<Inner>);

fn check_rank(ground: &GroundValuation, g: &GroupElem) -> Result<()> {
    match g.rank() {
        Some(r) if r != ground.rank() => Err(Error::RankMismatch { left: r, right: ground.rank() }),
        _ => Ok(()),
    }
}

fn slot_of(g: &GroupElem) -> usize {
    g.lowest_used_slot().unwrap_or(MAIN).max(MAIN)
}

/// `(x - a)`-adic coefficients of `f`, by repeated synthetic division.
pub(crate) fn taylor_shift(f: &Poly, a: &Rat) -> Vec<Rat> {
    if a.is_zero() {
        return f.coeffs().to_vec();
    }
    if a.is_integer() {
        let (mut c, den) = f.to_integral();
        let a = a.numer();
        shift_in_place(&mut c, a);
        return c.into_iter().map(|n| Rat::new(n, den.clone())).collect();
    }
    let mut c = f.coeffs().to_vec();
    shift_in_place(&mut c, a);
    c
}

fn shift_in_place<T>(c: &mut [T], a: &T)
where
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
    T: std::ops::AddAssign<T>,
{
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &c[j + 1] * a;
            c[j] += t;
        }
    }
}

impl Node {
    fn build(kind: NodeKind, ground: GroundValuation, degree: usize, sv: GroupElem, max_slot: usize) -> Node {
        Node(Arc::new(Inner { kind, ground, degree, sv, max_slot }))
    }

    pub fn root(ground: &GroundValuation) -> Node {
        let sv = GroupElem::minus_infinity(ground.rank());
        Node::build(NodeKind::Root, ground.clone(), 1, sv, MAIN)
    }

    /// `w_{a,delta}` for any `delta >= -oo` (with `delta = -oo` equivalent to the root).
    pub fn depth_zero(ground: &GroundValuation, a: Rat, delta: GroupElem) -> Result<Node> {
        check_rank(ground, &delta)?;
        if delta < GroupElem::minus_infinity(ground.rank()) {
            return Err(Error::Precondition(format!("depth-zero radius {delta} lies below -oo")));
        }
        let slot = slot_of(&delta);
        Ok(Node::build(NodeKind::DepthZero { a, delta: delta.clone() }, ground.clone(), 1, delta, slot))
    }

    pub(crate) fn ordinary_unchecked(parent: &Node, phi: Poly, gamma: GroupElem) -> Node {
        let degree = phi.deg0();
        let slot = parent.max_slot().max(slot_of(&gamma));
        Node::build(
            NodeKind::Ordinary { parent: parent.clone(), phi, gamma: gamma.clone() },
            parent.ground().clone(),
            degree,
            gamma,
            slot,
        )
    }

    pub(crate) fn limit_unchecked(family: &Family, phi: Poly, gamma: GroupElem, base_slot: usize) -> Node {
        let degree = phi.deg0();
        let slot = base_slot.max(slot_of(&gamma));
        Node::build(
            NodeKind::Limit { family: family.clone(), phi, gamma: gamma.clone() },
            family.ground().clone(),
            degree,
            gamma,
            slot,
        )
    }

    /// Ordinary augmentation `[self; phi, gamma]`.
    ///
    /// Checks that `phi` is monic with `deg phi >= deg self`, that
    /// `gamma > self(phi)`, and the constructive key-polynomial conditions:
    /// an equal-degree `phi` must be `self`-equivalent to the node's own key
    /// polynomial, and a higher-degree `phi` needs a commensurable node with
    /// `self(phi) = (deg phi / deg self) * sv(self)`, attained by the constant
    /// term of its expansion in the node's key polynomial. Augmenting the root with
    /// `x - a` yields `w_{a,gamma}`.
    pub fn augment(&self, phi: &Poly, gamma: GroupElem) -> Result<Node> {
        check_rank(self.ground(), &gamma)?;
        if !phi.is_monic() || phi.deg0() == 0 {
            return Err(Error::Precondition(format!("key polynomial {phi} must be monic of positive degree")));
        }
        if self.is_leaf() {
            return Err(Error::Precondition("cannot augment a finite leaf".into()));
        }
        let d = phi.deg0();
        if d < self.degree() {
            return Err(Error::Precondition(format!(
                "deg {phi} = {d} is below the node degree {}",
                self.degree()
            )));
        }
        let current = self.eval(phi)?;
        if gamma <= current {
            return Err(Error::Precondition(format!(
                "gamma = {gamma} must strictly exceed the current value {current} of {phi}"
            )));
        }
        if matches!(self.kind(), NodeKind::Root) {
            if d != 1 {
                return Err(Error::Precondition("the root only admits degree-one key polynomials".into()));
            }
            return Node::depth_zero(self.ground(), -phi.coeff(0), gamma);
        }
        let sv = self.sv();
        if d == self.degree() {
            let diff = self.eval(&(phi - &self.key_poly()))?;
            if diff < *sv {
                return Err(Error::Precondition(format!(
                    "{phi} is not a key polynomial of minimal degree: value of its difference {diff} < {sv}"
                )));
            }
        } else {
            if !sv.is_rational() {
                return Err(Error::Precondition(format!(
                    "node with incommensurable sv {sv} admits no key polynomial of higher degree"
                )));
            }
            if !d.is_multiple_of(self.degree()) {
                return Err(Error::Precondition(format!(
                    "deg {phi} is not a multiple of the node degree {}",
                    self.degree()
                )));
            }
            let expect = sv.times(d / self.degree());
            if current != expect {
                return Err(Error::Precondition(format!(
                    "{phi} is not a key polynomial: value {current} differs from {expect}"
                )));
            }
            let a0 = phi.expand(&self.key_poly())?.swap_remove(0);
            if self.eval(&a0)? != current {
                return Err(Error::Precondition(format!(
                    "{phi} is not a key polynomial: it is divisible by {} in the graded sense",
                    self.key_poly()
                )));
            }
        }
        Ok(Node::ordinary_unchecked(self, phi.clone(), gamma))
    }

    pub fn kind(&self) -> &NodeKind {
        &self.0.kind
    }

    pub fn ground(&self) -> &GroundValuation {
        &self.0.ground
    }

    pub fn rank(&self) -> usize {
        self.0.ground.rank()
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Singular value: the value of a key polynomial of minimal degree.
    pub fn sv(&self) -> &GroupElem {
        &self.0.sv
    }

    pub fn is_leaf(&self) -> bool {
        self.0.sv.is_infinite()
    }

    /// Most significant slot still free for a probe infinitesimal is `max_slot + 1`.
    pub fn max_slot(&self) -> usize {
        self.0.max_slot
    }

    /// A key polynomial of minimal degree.
    pub fn key_poly(&self) -> Poly {
        match self.kind() {
            NodeKind::Root => Poly::x(),
            NodeKind::DepthZero { a, .. } => Poly::x_minus(a.clone()),
            NodeKind::Ordinary { phi, .. } | NodeKind::Limit { phi, .. } => phi.clone(),
        }
    }

    /// The augmentation value defining the node (`delta` for depth-zero nodes).
    pub fn gamma(&self) -> Option<&GroupElem> {
        match self.kind() {
            NodeKind::Root => None,
            NodeKind::DepthZero { delta, .. } => Some(delta),
            NodeKind::Ordinary { gamma, .. } | NodeKind::Limit { gamma, .. } => Some(gamma),
        }
    }

    /// Immediate predecessor in the construction: the parent of an ordinary
    /// augmentation, the first family member of a limit augmentation, the
    /// root for depth-zero nodes.
    pub fn chain_parent(&self) -> Result<Option<Node>> {
        Ok(match self.kind() {
            NodeKind::Root => None,
            NodeKind::DepthZero { .. } => Some(Node::root(self.ground())),
            NodeKind::Ordinary { parent, .. } => Some(parent.clone()),
            NodeKind::Limit { family, .. } => Some(family.first()?),
        })
    }

    /// Construction ancestors, from the root-most node up to `self`.
    pub fn ancestors(&self) -> Result<Vec<Node>> {
        let mut out = vec![self.clone()];
        let mut cur = self.clone();
        while let Some(p) = cur.chain_parent()? {
            out.push(p.clone());
            cur = p;
        }
        out.reverse();
        Ok(out)
    }

    /// Length of the MLV chain: strong ordinary steps plus limit steps.
    /// Equal-degree augmentations replace the last step and add nothing.
    pub fn depth(&self) -> usize {
        self.depth_counts().0
    }

    /// Number of limit steps in the MLV chain.
    pub fn lim_depth(&self) -> usize {
        self.depth_counts().1
    }

    fn depth_counts(&self) -> (usize, usize) {
        match self.kind() {
            NodeKind::Root | NodeKind::DepthZero { .. } => (0, 0),
            NodeKind::Ordinary { parent, .. } => {
                let (d, l) = parent.depth_counts();
                if self.degree() > parent.degree() {
                    (d + 1, l)
                } else {
                    (d, l)
                }
            }
            NodeKind::Limit { family, .. } => {
                let (d, l) = family.first().map(|n| n.depth_counts()).unwrap_or((0, 0));
                (d + 1, l + 1)
            }
        }
    }

    pub fn eval(&self, f: &Poly) -> Result<GroupElem> {
        if f.is_zero() {
            return Ok(GroupElem::Infinity);
        }
        match self.kind() {
            NodeKind::Root => {
                let mut v = GroupElem::minus_infinity(self.rank()).times(f.deg0());
                if let (GroupElem::Vector(s), Some(n)) = (&mut v, self.ground().ord(f.lc().expect("nonzero"))) {
                    s[MAIN] = Rat::from_integer(n.into());
                }
                Ok(v)
            }
            NodeKind::DepthZero { a, delta } => {
                let g = self.ground();
                let mut best = GroupElem::Infinity;
                for (s, c) in taylor_shift(f, a).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let t = if s == 0 { g.v(c) } else { &g.v(c) + &delta.times(s) };
                    if t < best {
                        best = t;
                    }
                }
                Ok(best)
            }
            NodeKind::Ordinary { parent, phi, gamma } => {
                let mut best = GroupElem::Infinity;
                for (s, a) in f.expand(phi)?.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let base = parent.eval(a)?;
                    let t = if s == 0 { base } else { &base + &gamma.times(s) };
                    if t < best {
                        best = t;
                    }
                }
                Ok(best)
            }
            NodeKind::Limit { family, phi, gamma } => {
                let mut best = GroupElem::Infinity;
                for (s, a) in f.expand(phi)?.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let base = match family.stable_value(a)? {
                        Stability::Stable { value, .. } => value,
                        Stability::Unstable { tried } => return Err(Error::StabilityHorizon { tried }),
                    };
                    let t = if s == 0 { base } else { &base + &gamma.times(s) };
                    if t < best {
                        best = t;
                    }
                }
                Ok(best)
            }
        }
    }

    /// `Gamma_mu^0`: the value group of polynomials of degree below `deg(self)`.
    pub fn lower_group(&self) -> Result<Subgroup> {
        match self.kind() {
            NodeKind::Root | NodeKind::DepthZero { .. } => Ok(Subgroup::integers()),
            NodeKind::Ordinary { parent, .. } => {
                if self.degree() > parent.degree() {
                    parent.value_group()
                } else {
                    parent.lower_group()
                }
            }
            NodeKind::Limit { family, .. } => family.last()?.value_group(),
        }
    }

    /// `Gamma_mu = <Gamma_mu^0, sv(mu)>`.
    pub fn value_group(&self) -> Result<Subgroup> {
        Ok(self.value_group_with_index()?.0)
    }

    /// Relative ramification index `(Gamma_mu : Gamma_mu^0)`.
    pub fn e_rel(&self) -> Result<Index> {
        Ok(self.value_group_with_index()?.1)
    }

    fn value_group_with_index(&self) -> Result<(Subgroup, Index)> {
        if self.is_leaf() {
            return Err(Error::Domain("a finite leaf has no singular value group".into()));
        }
        let low = self.lower_group()?;
        if !low.is_rational() {
            return Err(Error::Domain(format!("lower value group {low} is not rational")));
        }
        low.extend(self.sv())
    }

    /// A polynomial of degree below the next key degree whose value is the
    /// rational `target`, built as a monomial in the construction's key
    /// polynomials. Only available along strong augmentations.
    pub fn monomial_with_value(&self, target: &Rat) -> Option<Poly> {
        match self.kind() {
            NodeKind::Root => None,
            NodeKind::DepthZero { a, delta } => {
                let d = delta.as_rational()?;
                let (n, e) = (d.numer(), d.denom());
                let t = target * Rat::from_integer(e.clone());
                if !t.is_integer() {
                    return None;
                }
                let t = t.to_integer().mod_floor(e);
                let j = if e.is_one() {
                    BigInt::zero()
                } else {
                    (t * n.modinv(e)?).mod_floor(e)
                };
                let i = target - d * Rat::from_integer(j.clone());
                let i = i.is_integer().then(|| i.to_integer().to_i64())??;
                let j = j.to_u32()?;
                Some(Poly::x_minus(a.clone()).pow(j).scale(&self.ground().p_pow(i)))
            }
            NodeKind::Ordinary { parent, phi, gamma } => {
                if self.degree() <= parent.degree() {
                    return None;
                }
                let g = gamma.as_rational()?;
                let low = parent.value_group().ok()?;
                let e = match low.extend(gamma).ok()?.1 {
                    Index::Finite(e) => e,
                    Index::Infinite => return None,
                };
                (0..e).find_map(|j| {
                    let rest = target - g * Rat::from_integer(j.into());
                    low.contains(&rest)
                        .then(|| parent.monomial_with_value(&rest))
                        .flatten()
                        .map(|m| &phi.pow(j as u32) * &m)
                })
            }
            NodeKind::Limit { .. } => None,
        }
    }

    /// A key polynomial of degree greater than `deg(self)`, when one can be
    /// written down: `phi^e + m` with `e = e_rel > 1` and `m` a monomial of
    /// value `e * sv`; for a depth-zero node of integral radius, a quadratic
    /// whose residual polynomial is irreducible over the prime field.
    pub fn strong_key_witness(&self) -> Option<Poly> {
        let sv = self.sv().as_rational()?;
        let e = match self.e_rel().ok()? {
            Index::Finite(e) => e,
            Index::Infinite => return None,
        };
        let phi = self.key_poly();
        let target = sv * Rat::from_integer(e.into());
        match self.kind() {
            NodeKind::DepthZero { .. } if e == 1 => {
                let p = self.ground().prime();
                let c = irreducible_quadratic_constant(p)?;
                let n = sv.to_integer().to_i64()?;
                let lin = phi.scale(&self.ground().p_pow(n));
                let cst = Poly::constant(Rat::from_integer(c.into()) * self.ground().p_pow(2 * n));
                Some(&(&phi.pow(2) + &lin) + &cst)
            }
            _ if e > 1 => {
                let m = match self.kind() {
                    NodeKind::DepthZero { .. } => self.monomial_with_value(&target)?,
                    NodeKind::Ordinary { parent, .. } if self.degree() > parent.degree() => {
                        parent.monomial_with_value(&target)?
                    }
                    _ => return None,
                };
                Some(&phi.pow(e as u32) + &m)
            }
            _ => None,
        }
    }

    /// Slot of a fresh positive infinitesimal below every value this node
    /// can produce.
    pub fn probe_slot(&self) -> Result<usize> {
        let s = self.max_slot() + 1;
        if s >= self.rank() {
            Err(Error::RankExhausted { rank: self.rank() })
        } else {
            Ok(s)
        }
    }

    /// Whether `phi` divides `f` in the graded sense: compares `self(f)` with
    /// the value under the probe `[self; phi, self(phi) + eps]`.
    pub fn divides_probe(&self, phi: &Poly, f: &Poly) -> Result<bool> {
        if !phi.is_monic() || phi.deg0() == 0 {
            return Err(Error::Precondition(format!("{phi} must be monic of positive degree")));
        }
        let slot = self.probe_slot()?;
        let base = self.eval(phi)?;
        if base.is_infinite() {
            return Err(Error::Domain(format!("{phi} lies in the support")));
        }
        let probe = Node::ordinary_unchecked(self, phi.clone(), &base + &GroupElem::unit(slot, self.rank()));
        Ok(self.eval(f)? < probe.eval(f)?)
    }

    /// Bounded check that `self(f)` is the minimum over `g`-expansions,
    /// i.e. that `g` is `self`-minimal, for polynomials of degree at most
    /// `deg_bound` and coefficient p-height at most `height_bound`.
    pub fn is_minimal_oracle(&self, g: &Poly, deg_bound: usize, height_bound: u32) -> Result<Minimality> {
        if !g.is_monic() || g.deg0() == 0 {
            return Err(Error::Precondition(format!("{g} must be monic of positive degree")));
        }
        let gval = self.eval(g)?;
        let ground = self.ground();
        let mut checked = 0usize;
        let mut test = |f: &Poly| -> Result<Option<Poly>> {
            checked += 1;
            let lhs = self.eval(f)?;
            let mut rhs = GroupElem::Infinity;
            for (s, a) in f.expand(g)?.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let t = if s == 0 { self.eval(a)? } else { &self.eval(a)? + &gval.times(s) };
                rhs = rhs.min(t);
            }
            Ok((lhs != rhs).then(|| f.clone()))
        };
        let height = |j: u32| ground.p_pow(j as i64);
        for k in 0..=deg_bound {
            for j in 0..=height_bound {
                if let Some(w) = test(&Poly::monomial(height(j), k))? {
                    return Ok(Minimality::Refuted { witness: w });
                }
            }
        }
        let one = Rat::one();
        for k in 1..=deg_bound {
            for i in 0..k {
                for sign in [one.clone(), -one.clone()] {
                    for j in 0..=height_bound {
                        let f = &Poly::monomial(one.clone(), k) + &Poly::monomial(&sign * height(j), i);
                        if let Some(w) = test(&f)? {
                            return Ok(Minimality::Refuted { witness: w });
                        }
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b65_795f_6f72_636c);
        for _ in 0..200 {
            let deg = rng.gen_range(0..=deg_bound);
            let coeffs: Vec<Rat> = (0..=deg)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        Rat::zero()
                    } else {
                        let u: i64 = rng.gen_range(-6..=6);
                        Rat::from_integer(u.into()) * height(rng.gen_range(0..=height_bound))
                    }
                })
                .collect();
            let f = Poly::from_coeffs(coeffs);
            if f.is_zero() {
                continue;
            }
            if let Some(w) = test(&f)? {
                return Ok(Minimality::Refuted { witness: w });
            }
        }
        Ok(Minimality::Confirmed { deg_bound, height_bound, checked })
    }
}

/// Smallest `c` with `y^2 + y + c` irreducible over `F_p`.
fn irreducible_quadratic_constant(p: u64) -> Option<u64> {
    if p > 100_000 {
        return None;
    }
    (0..p).find(|&c| (0..p).all(|y| (y * y + y + c) % p != 0))
}

/// Outcome of the bounded minimality oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Minimality {
    Confirmed { deg_bound: usize, height_bound: u32, checked: usize },
    Refuted { witness: Poly },
}

impl PartialEq for Node {
    /// Equality of defining data, not of valuations (see `tree::node_eq`).
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.ground() != other.ground() {
            return false;
        }
        match (self.kind(), other.kind()) {
            (NodeKind::Root, NodeKind::Root) => true,
            (NodeKind::DepthZero { a, delta }, NodeKind::DepthZero { a: b, delta: e }) => a == b && delta == e,
            (
                NodeKind::Ordinary { parent, phi, gamma },
                NodeKind::Ordinary { parent: q, phi: psi, gamma: g },
            ) => phi == psi && gamma == g && parent == q,
            (
                NodeKind::Limit { family, phi, gamma },
                NodeKind::Limit { family: fam, phi: psi, gamma: g },
            ) => phi == psi && gamma == g && family == fam,
            _ => false,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            NodeKind::Root => f.write_str("w(-oo)"),
            NodeKind::DepthZero { a, delta } => write!(f, "w({}, {})", fmt_rat(a), delta),
            NodeKind::Ordinary { parent, phi, gamma } => write!(f, "[{parent}; {phi}, {gamma}]"),
            NodeKind::Limit { phi, gamma, .. } => write!(f, "[A; {phi}, {gamma}]"),
        }
    }
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<Node>();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn g7() -> GroundValuation {
        GroundValuation::new(7, 3).unwrap()
    }

    fn q(x: Rat) -> GroupElem {
        GroupElem::rational(x, 3)
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let f = Poly::from_ints(&[3, -1, 4, 1, -5]);
        let a = frac(2, 3);
        let c = taylor_shift(&f, &a);
        let back: Poly = c.iter().enumerate().fold(Poly::zero(), |acc, (s, cs)| {
            &acc + &Poly::x_minus(a.clone()).pow(s as u32).scale(cs)
        });
        assert_eq!(back, f);
    }

    #[test]
    fn root_formula() {
        let r = Node::root(&g7());
        let f = Poly::from_ints(&[0, 7, 0, 5]);
        assert_eq!(r.eval(&f).unwrap(), GroupElem::Vector(vec![rat(-3), rat(0), rat(0)]));
    }

    #[test]
    fn depth_zero_examples() {
        let g = g7();
        let w = Node::depth_zero(&g, rat(0), q(frac(3, 5))).unwrap();
        let phi1 = Poly::parse("x^5 + p^3", &g.env()).unwrap();
        assert_eq!(w.eval(&phi1).unwrap(), q(rat(3)));
        let leaf = Node::depth_zero(&g, rat(5), GroupElem::Infinity).unwrap();
        assert_eq!(leaf.eval(&Poly::x_minus(rat(5))).unwrap(), GroupElem::Infinity);
    }

    #[test]
    fn augment_rejections() {
        let g = g7();
        let w = Node::depth_zero(&g, rat(0), q(frac(3, 5))).unwrap();
        let phi1 = Poly::parse("x^5 + p^3", &g.env()).unwrap();
        assert!(w.augment(&phi1, q(rat(3))).is_err());
        assert!(w.augment(&Poly::parse("x^5", &g.env()).unwrap(), q(rat(4))).is_err());
        assert!(w.augment(&Poly::parse("2x^5 + p^3", &g.env()).unwrap(), q(rat(4))).is_err());
        assert!(w.augment(&phi1, q(frac(10, 3))).is_ok());
        let r = Node::root(&g);
        let d = r.augment(&Poly::x_minus(rat(7)), q(rat(2))).unwrap();
        assert!(matches!(d.kind(), NodeKind::DepthZero { .. }));
    }

    #[test]
    fn quadratic_witness_is_key() {
        let g = g7();
        let w = Node::depth_zero(&g, rat(1), q(rat(2))).unwrap();
        let k = w.strong_key_witness().unwrap();
        assert_eq!(k.degree(), Some(2));
        assert!(w.augment(&k, q(rat(5))).is_ok());
        assert!(matches!(w.is_minimal_oracle(&k, 6, 3).unwrap(), Minimality::Confirmed { .. }));
    }
}
