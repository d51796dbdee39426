//! Continuous families of valuations, stable values and limit augmentations.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::node::Node;
use crate::poly::{GroundValuation, Poly};
use crate::rational::{rat, Rat};
use crate::tree::{leq, TriState};
use crate::value_group::GroupElem;

pub const DEFAULT_HORIZON: usize = 24;

/// A rational sequence `a_1, a_2, ...` (indices start at 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RatSeq {
    /// A finite list.
    Explicit(Vec<Rat>),
    /// `start + (i-1) * step`.
    Linear { start: Rat, step: Rat },
    /// `limit - scale * ratio^i`.
    Geometric { limit: Rat, scale: Rat, ratio: Rat },
    /// Newton iterates of a simple root of `poly`, reduced into `[0, p^i)`.
    HenselRoot { poly: Poly, seed: Rat },
}

impl RatSeq {
    /// The first `n` terms (fewer for a short explicit list).
    pub fn terms(&self, n: usize, ground: &GroundValuation) -> Result<Vec<Rat>> {
        Ok(match self {
            RatSeq::Explicit(v) => v.iter().take(n).cloned().collect(),
            RatSeq::Linear { start, step } => (0..n).map(|i| start + step * rat(i as i64)).collect(),
            RatSeq::Geometric { limit, scale, ratio } => {
                let mut out = Vec::with_capacity(n);
                let mut r = ratio.clone();
                for _ in 0..n {
                    out.push(limit - scale * &r);
                    r *= ratio;
                }
                out
            }
            RatSeq::HenselRoot { poly, seed } => hensel_iterates(poly, seed, n, ground)?,
        })
    }
}

fn hensel_iterates(poly: &Poly, seed: &Rat, n: usize, ground: &GroundValuation) -> Result<Vec<Rat>> {
    let bad = |m: String| Error::InvalidFamily(m);
    if !seed.is_integer() || poly.coeffs().iter().any(|c| !c.is_integer()) {
        return Err(bad("Hensel lifting needs an integral polynomial and seed".into()));
    }
    let f: Vec<BigInt> = poly.coeffs().iter().map(|c| c.to_integer()).collect();
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let ev = |cs: &[BigInt], a: &BigInt| cs.iter().rev().fold(BigInt::zero(), |acc, c| acc * a + c);
    let p = ground.p().clone();
    let mut a = seed.to_integer().mod_floor(&p);
    if !ev(&f, &a).mod_floor(&p).is_zero() {
        return Err(bad(format!("seed {seed} is not a root of {poly} modulo {p}")));
    }
    if ev(&df, &a).mod_floor(&p).is_zero() {
        return Err(bad(format!("seed {seed} is a multiple root of {poly} modulo {p}")));
    }
    let mut out = Vec::with_capacity(n);
    let mut modulus = p.clone();
    for _ in 0..n {
        out.push(Rat::from_integer(a.clone()));
        modulus = &modulus * &p;
        let inv = ev(&df, &a)
            .mod_floor(&modulus)
            .modinv(&modulus)
            .ok_or_else(|| bad("derivative not invertible during lifting".into()))?;
        a = (&a - ev(&f, &a) * inv).mod_floor(&modulus);
    }
    Ok(out)
}

/// The key polynomials `chi_i` of an augmentation rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Chi {
    Fixed(Poly),
    /// `chi_i = x - a_i`.
    Shift(RatSeq),
}

/// How the members `rho_1 < rho_2 < ...` are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyGen {
    Explicit(Vec<Node>),
    /// `rho_i = w_{a_i, v(a_{i+1} - a_i)}`; repeated consecutive terms are skipped.
    PseudoConvergent(RatSeq),
    /// `rho_i = [base; chi_i, beta_i]`.
    AugmentationRule { base: Node, chi: Chi, beta: RatSeq },
}

#[derive(Debug, Default)]
struct Cache {
    members: Option<Result<Vec<Node>>>,
}

#[derive(Debug)]
struct FamilyInner {
    gen: FamilyGen,
    horizon: usize,
    declared_sup: Option<GroupElem>,
    ground: GroundValuation,
    cache: RwLock<Cache>,
}

/// A continuous family, materialised lazily up to its horizon.
#[derive(Clone, Debug)]
pub struct Family(Arc<FamilyInner>);

/// Outcome of a stable-value query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    /// `rho_i(f) = value` for all `i >= certified_at`, certified after
    /// looking at `members_used` members.
    Stable { value: GroupElem, certified_at: usize, members_used: usize },
    /// Values still changing after `tried` members.
    Unstable { tried: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyClass {
    /// `m < m_inf`.
    Essential,
    /// `m = m_inf`.
    Inessential,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnstableSearch {
    Found { m_inf: usize, phi: Poly, class: FamilyClass, minimal_certified: bool },
    NoneUpTo { deg_bound: usize, horizon: usize },
}

impl Family {
    pub fn new(ground: &GroundValuation, gen: FamilyGen, horizon: usize, declared_sup: Option<GroupElem>) -> Result<Family> {
        if horizon < 2 {
            return Err(Error::Config(format!("family horizon must be at least 2, got {horizon}")));
        }
        if let Some(s) = &declared_sup {
            if let Some(r) = s.rank() {
                if r != ground.rank() {
                    return Err(Error::RankMismatch { left: r, right: ground.rank() });
                }
            }
        }
        Ok(Family(Arc::new(FamilyInner {
            gen,
            horizon,
            declared_sup,
            ground: ground.clone(),
            cache: RwLock::new(Cache::default()),
        })))
    }

    pub fn ground(&self) -> &GroundValuation {
        &self.0.ground
    }

    pub fn generator(&self) -> &FamilyGen {
        &self.0.gen
    }

    pub fn horizon(&self) -> usize {
        self.0.horizon
    }

    pub fn declared_sup(&self) -> Option<&GroupElem> {
        self.0.declared_sup.as_ref()
    }

    /// Same generator with another horizon.
    pub fn with_horizon(&self, horizon: usize) -> Result<Family> {
        Family::new(self.ground(), self.0.gen.clone(), horizon, self.0.declared_sup.clone())
    }

    /// The validated prefix `rho_1, ..., rho_N`.
    pub fn members(&self) -> Result<Vec<Node>> {
        if let Some(m) = &self.0.cache.read().expect("family cache poisoned").members {
            return m.clone();
        }
        let mut cache = self.0.cache.write().expect("family cache poisoned");
        if cache.members.is_none() {
            cache.members = Some(self.generate());
        }
        cache.members.clone().expect("just filled")
    }

    pub fn first(&self) -> Result<Node> {
        Ok(self.members()?.swap_remove(0))
    }

    pub fn last(&self) -> Result<Node> {
        Ok(self.members()?.pop().expect("nonempty prefix"))
    }

    /// Stable degree `m`: the common degree of all members.
    pub fn stable_degree(&self) -> Result<usize> {
        Ok(self.first()?.degree())
    }

    fn generate(&self) -> Result<Vec<Node>> {
        let n = self.0.horizon;
        let g = &self.0.ground;
        let nodes = match &self.0.gen {
            FamilyGen::Explicit(v) => v.iter().take(n).cloned().collect(),
            FamilyGen::PseudoConvergent(seq) => {
                let mut want = n + 1;
                let distinct = loop {
                    let terms = seq.terms(want, g)?;
                    let short = terms.len() < want;
                    let mut d: Vec<Rat> = Vec::new();
                    for t in terms {
                        if d.last() != Some(&t) {
                            d.push(t);
                        }
                    }
                    if d.len() > n || short || want > 4 * n + 16 {
                        break d;
                    }
                    want *= 2;
                };
                distinct
                    .windows(2)
                    .take(n)
                    .map(|w| Node::depth_zero(g, w[0].clone(), g.v(&(&w[1] - &w[0]))))
                    .collect::<Result<Vec<_>>>()?
            }
            FamilyGen::AugmentationRule { base, chi, beta } => {
                let betas = beta.terms(n, g)?;
                let chis: Vec<Poly> = match chi {
                    Chi::Fixed(f) => vec![f.clone(); betas.len()],
                    Chi::Shift(s) => s.terms(betas.len(), g)?.into_iter().map(Poly::x_minus).collect(),
                };
                chis.iter()
                    .zip(betas)
                    .map(|(c, b)| base.augment(c, g.rational(b)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::InvalidFamily(format!("rule member: {e}")))?
            }
        };
        self.validate(&nodes)?;
        Ok(nodes)
    }

    fn validate(&self, nodes: &[Node]) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFamily(m));
        let Some(first) = nodes.first() else {
            return bad("no members".into());
        };
        if nodes.len() < 2 {
            return bad("a single member has a maximum; at least two are needed".into());
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if w[1].ground() != self.ground() || w[0].ground() != self.ground() {
                return bad("members use a different ground valuation".into());
            }
            if w[1].degree() != first.degree() {
                return bad(format!("member {} has degree {} != {}", i + 2, w[1].degree(), first.degree()));
            }
            if w[1].is_leaf() {
                return bad(format!("member {} is a leaf", i + 2));
            }
            if !leq(&w[0], &w[1])? || leq(&w[1], &w[0])? {
                return bad(format!("members {} and {} are not strictly increasing", i + 1, i + 2));
            }
        }
        Ok(())
    }

    /// Values `rho_1(f), ..., rho_N(f)`.
    pub fn values(&self, f: &Poly) -> Result<Vec<GroupElem>> {
        self.members()?.iter().map(|r| r.eval(f)).collect()
    }

    /// `rho_A(f)` when two consecutive members agree (then all later ones
    /// agree too) or when `deg f < m`.
    pub fn stable_value(&self, f: &Poly) -> Result<Stability> {
        let members = self.members()?;
        if f.is_zero() {
            return Ok(Stability::Stable { value: GroupElem::Infinity, certified_at: 1, members_used: 1 });
        }
        if f.deg0() < members[0].degree() {
            return Ok(Stability::Stable { value: members[0].eval(f)?, certified_at: 1, members_used: 1 });
        }
        let mut prev = members[0].eval(f)?;
        for (i, r) in members.iter().enumerate().skip(1) {
            let cur = r.eval(f)?;
            if cur == prev {
                return Ok(Stability::Stable { value: cur, certified_at: i, members_used: i + 1 });
            }
            if cur < prev {
                return Err(Error::InvalidFamily(format!("values of {f} decrease at member {}", i + 1)));
            }
            prev = cur;
        }
        Ok(Stability::Unstable { tried: members.len() })
    }

    fn suggested_candidates(&self) -> Vec<Poly> {
        let from_seq = |s: &RatSeq| match s {
            RatSeq::HenselRoot { poly, .. } => poly.lc().map(|c| poly.scale(&(Rat::one() / c))),
            _ => None,
        };
        let mut out = Vec::new();
        match &self.0.gen {
            FamilyGen::PseudoConvergent(s) => out.extend(from_seq(s)),
            FamilyGen::AugmentationRule { chi, .. } => match chi {
                Chi::Fixed(f) => out.push(f.clone()),
                Chi::Shift(s) => out.extend(from_seq(s)),
            },
            FamilyGen::Explicit(_) => {}
        }
        if let Ok(ms) = self.members() {
            out.extend(ms[..ms.len() - 1].iter().map(|m| m.key_poly()));
        }
        out
    }

    /// Searches a monic unstable polynomial of minimal degree among the
    /// supplied candidates and the generator's structural suggestions.
    /// Instability seen on the prefix is rechecked on a prefix twice as long
    /// when the generator can extend.
    pub fn find_unstable(&self, deg_bound: usize, candidates: &[Poly]) -> Result<UnstableSearch> {
        let m = self.stable_degree()?;
        let mut cands: Vec<Poly> = candidates.iter().cloned().chain(self.suggested_candidates()).collect();
        cands.retain(|c| c.is_monic() && c.deg0() >= m && c.deg0() <= deg_bound);
        cands.sort_by_key(|c| c.deg0());
        let longer = match self.0.gen {
            FamilyGen::Explicit(_) => None,
            _ => Some(self.with_horizon(2 * self.horizon())?),
        };
        for c in cands {
            if !matches!(self.stable_value(&c)?, Stability::Unstable { .. }) {
                continue;
            }
            let confirmed = match &longer {
                Some(f) => matches!(f.stable_value(&c)?, Stability::Unstable { .. }),
                None => true,
            };
            if confirmed {
                let m_inf = c.deg0();
                let class = if m_inf == m { FamilyClass::Inessential } else { FamilyClass::Essential };
                return Ok(UnstableSearch::Found { m_inf, phi: c, class, minimal_certified: m_inf == m });
            }
        }
        Ok(UnstableSearch::NoneUpTo { deg_bound, horizon: self.horizon() })
    }

    /// `gamma_A = sup rho_i(phi)`: a declared supremum after validation, or
    /// a recognised pattern of the generated values (unbounded growth gives
    /// `oo-`; geometric convergence to `b` gives `b-`).
    pub fn gamma_a(&self, phi: &Poly) -> Result<GroupElem> {
        let vals = self.values(phi)?;
        if vals.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition(format!("{phi} is not unstable on the generated members")));
        }
        let top = vals.last().expect("nonempty");
        if let Some(s) = self.declared_sup() {
            if s.is_infinite() || s.is_rational() {
                return Err(Error::Precondition(format!(
                    "declared supremum {s} must be incommensurable"
                )));
            }
            if s <= top {
                return Err(Error::Precondition(format!(
                    "declared supremum {s} does not exceed the generated value {top}"
                )));
            }
            return Ok(s.clone());
        }
        let rank = self.ground().rank();
        let qs: Option<Vec<Rat>> = vals.iter().map(|v| v.as_rational().cloned()).collect();
        let under = |why: &str| Err(Error::SupUnderdetermined(format!("values of {phi}: {why}")));
        let Some(qs) = qs else {
            return under("not all rational");
        };
        if qs.len() < 3 {
            return under("too few members to recognise a pattern");
        }
        let diffs: Vec<Rat> = qs.windows(2).map(|w| &w[1] - &w[0]).collect();
        if diffs.windows(2).all(|w| w[1] >= w[0]) {
            return Ok(GroupElem::infinity_minus(rank));
        }
        let r = &diffs[1] / &diffs[0];
        if r.is_positive() && r < Rat::one() && diffs.windows(2).all(|w| &w[1] / &w[0] == r) {
            let d = diffs.last().expect("nonempty");
            let limit = qs.last().expect("nonempty") + d * &r / (Rat::one() - &r);
            return Ok(GroupElem::ball_minus(limit, rank));
        }
        under("no recognised pattern; declare the supremum")
    }

    /// Limit augmentation `[A; phi, gamma]`.
    pub fn limit_augment(&self, phi: &Poly, gamma: GroupElem) -> Result<Node> {
        if let Some(r) = gamma.rank() {
            if r != self.ground().rank() {
                return Err(Error::RankMismatch { left: r, right: self.ground().rank() });
            }
        }
        if !phi.is_monic() {
            return Err(Error::Precondition(format!("limit key polynomial {phi} must be monic")));
        }
        let members = self.members()?;
        if phi.deg0() < members[0].degree() {
            return Err(Error::Precondition(format!("{phi} has degree below the stable degree")));
        }
        if let Stability::Stable { value, .. } = self.stable_value(phi)? {
            return Err(Error::Precondition(format!("{phi} is stable with value {value}")));
        }
        let vals = self.values(phi)?;
        let top = vals.iter().max().expect("nonempty");
        if gamma <= *top {
            return Err(Error::Precondition(format!(
                "gamma = {gamma} must exceed every generated value; member value {top}"
            )));
        }
        let slot = members.iter().map(|m| m.max_slot()).max().unwrap_or(1);
        Ok(Node::limit_unchecked(self, phi.clone(), gamma, slot))
    }

    /// The minimal limit augmentation `mu_A = [A; phi, gamma_A]`.
    pub fn mu_a(&self, phi: &Poly) -> Result<Node> {
        self.limit_augment(phi, self.gamma_a(phi)?)
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.gen == other.0.gen
                && self.0.horizon == other.0.horizon
                && self.0.declared_sup == other.0.declared_sup
                && self.0.ground == other.0.ground)
    }
}

/// Mutual cofinality on the generated prefixes: `No` as soon as two members
/// are incomparable, `Yes` when every member of each prefix lies below some
/// member of the other, `Unknown` otherwise.
pub fn family_equiv(a: &Family, b: &Family) -> Result<TriState> {
    let ma = a.members()?;
    let mb = b.members()?;
    let mut a_in_b = vec![false; ma.len()];
    let mut b_in_a = vec![false; mb.len()];
    for (i, x) in ma.iter().enumerate() {
        for (j, y) in mb.iter().enumerate() {
            let xy = leq(x, y)?;
            let yx = leq(y, x)?;
            if !xy && !yx {
                return Ok(TriState::No);
            }
            a_in_b[i] |= xy;
            b_in_a[j] |= yx;
        }
    }
    if a_in_b.iter().all(|&t| t) && b_in_a.iter().all(|&t| t) {
        Ok(TriState::Yes)
    } else {
        Ok(TriState::Unknown)
    }
}
