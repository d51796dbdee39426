//! Finite-rank lexicographic value groups.
//!
//! A [`GroupElem`] is a vector of exact rationals compared lexicographically,
//! slot 0 most significant, or the absorbing [`GroupElem::Infinity`]. The slot
//! layout is `[top | main | sub...]`: the base group `Z` and its divisible hull
//! live in the main slot, the top slot carries `-oo = (-1|0|0)` and
//! `oo- = (1|0|0)`, and the sub slots carry the ball-cut elements `b-`, `b+`
//! as well as any probe infinitesimals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, parse_rat, rat_gcd, Rat};

pub const DEFAULT_RANK: usize = 3;
pub const TOP: usize = 0;
pub const MAIN: usize = 1;
pub const SUB: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElem {
    Vector(Vec<Rat>),
    Infinity,
}

impl GroupElem {
    pub fn zero(rank: usize) -> Self {
        GroupElem::Vector(vec![Rat::zero(); rank])
    }

    fn with_slot(rank: usize, slot: usize, q: Rat) -> Self {
        let mut v = vec![Rat::zero(); rank];
        v[slot] = q;
        GroupElem::Vector(v)
    }

    /// The plain rational `q = (0|q|0)`.
    pub fn rational(q: Rat, rank: usize) -> Self {
        Self::with_slot(rank, MAIN, q)
    }

    /// `-oo = (-1|0|0)`, the minimum of the canonical cut group.
    pub fn minus_infinity(rank: usize) -> Self {
        Self::with_slot(rank, TOP, -Rat::one())
    }

    /// `oo- = (1|0|0)`, the immediate predecessor of infinity.
    pub fn infinity_minus(rank: usize) -> Self {
        Self::with_slot(rank, TOP, Rat::one())
    }

    /// `b- = (0|b|-1)`.
    pub fn ball_minus(b: Rat, rank: usize) -> Self {
        let mut v = vec![Rat::zero(); rank];
        v[MAIN] = b;
        v[SUB] = -Rat::one();
        GroupElem::Vector(v)
    }

    /// `b+ = (0|b|1)`.
    pub fn ball_plus(b: Rat, rank: usize) -> Self {
        let mut v = vec![Rat::zero(); rank];
        v[MAIN] = b;
        v[SUB] = Rat::one();
        GroupElem::Vector(v)
    }

    /// The positive infinitesimal `e_slot`.
    pub fn unit(slot: usize, rank: usize) -> Self {
        Self::with_slot(rank, slot, Rat::one())
    }

    pub fn from_slots(slots: Vec<Rat>) -> Result<Self> {
        if slots.len() < DEFAULT_RANK {
            return Err(Error::Config(format!(
                "rank must be at least {DEFAULT_RANK}, got {}",
                slots.len()
            )));
        }
        Ok(GroupElem::Vector(slots))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GroupElem::Infinity)
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            GroupElem::Vector(v) => Some(v.len()),
            GroupElem::Infinity => None,
        }
    }

    pub fn slots(&self) -> Option<&[Rat]> {
        match self {
            GroupElem::Vector(v) => Some(v),
            GroupElem::Infinity => None,
        }
    }

    /// The main-slot rational, if every other slot is zero.
    pub fn as_rational(&self) -> Option<&Rat> {
        let v = self.slots()?;
        v.iter()
            .enumerate()
            .all(|(i, q)| i == MAIN || q.is_zero())
            .then(|| &v[MAIN])
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Index of the least significant nonzero slot, if any.
    pub fn lowest_used_slot(&self) -> Option<usize> {
        self.slots()?.iter().rposition(|q| !q.is_zero())
    }

    /// Same value padded (or checked) to the given rank.
    pub fn with_rank(self, rank: usize) -> Result<Self> {
        match self {
            GroupElem::Infinity => Ok(GroupElem::Infinity),
            GroupElem::Vector(mut v) => {
                if v.len() > rank {
                    if v[rank..].iter().any(|q| !q.is_zero()) {
                        return Err(Error::RankMismatch { left: v.len(), right: rank });
                    }
                    v.truncate(rank);
                } else {
                    v.resize(rank, Rat::zero());
                }
                Ok(GroupElem::Vector(v))
            }
        }
    }

    /// Lexicographic comparison; errors when two vectors differ in rank.
    pub fn lex_cmp(&self, other: &Self) -> Result<Ordering> {
        if let (GroupElem::Vector(a), GroupElem::Vector(b)) = (self, other) {
            if a.len() != b.len() {
                return Err(Error::RankMismatch { left: a.len(), right: b.len() });
            }
        }
        Ok(self.cmp(other))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if let (GroupElem::Vector(a), GroupElem::Vector(b)) = (self, other) {
            if a.len() != b.len() {
                return Err(Error::RankMismatch { left: a.len(), right: b.len() });
            }
        }
        Ok(self + other)
    }

    /// Group inverse; infinity has none.
    pub fn neg(&self) -> Result<Self> {
        match self {
            GroupElem::Vector(v) => Ok(GroupElem::Vector(v.iter().map(|q| -q).collect())),
            GroupElem::Infinity => Err(Error::Domain("infinity has no inverse".into())),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg()?)
    }

    /// Rational scaling. `n * inf` is defined only for `n > 0`.
    pub fn scalar_mul(&self, n: &Rat) -> Result<Self> {
        match self {
            GroupElem::Vector(v) => Ok(GroupElem::Vector(v.iter().map(|q| q * n).collect())),
            GroupElem::Infinity if n.is_positive() => Ok(GroupElem::Infinity),
            GroupElem::Infinity => Err(Error::Domain(format!(
                "{} * inf is undefined",
                fmt_rat(n)
            ))),
        }
    }

    /// `s * self` for a nonnegative integer `s`.
    pub(crate) fn times(&self, s: usize) -> Self {
        match self {
            GroupElem::Vector(v) => {
                let k = Rat::from_integer(s.into());
                GroupElem::Vector(v.iter().map(|q| q * &k).collect())
            }
            GroupElem::Infinity => GroupElem::Infinity,
        }
    }

    /// Parses `inf`, `-oo`, `oo-`, `(t|m|s...)`, `b-`, `b+` or a bare rational.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let t = s.trim();
        match t {
            "inf" | "oo" | "∞" => return Ok(GroupElem::Infinity),
            "-oo" | "-inf" => return Ok(Self::minus_infinity(rank)),
            "oo-" | "inf-" => return Ok(Self::infinity_minus(rank)),
            _ => {}
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let slots = inner.split('|').map(parse_rat).collect::<Result<Vec<_>>>()?;
            if slots.len() < 2 {
                return Err(Error::Parse(format!("group element needs at least 2 slots: {t:?}")));
            }
            return GroupElem::Vector(slots).with_rank(rank);
        }
        if let Some(b) = t.strip_suffix('-') {
            return Ok(Self::ball_minus(parse_rat(b)?, rank));
        }
        if let Some(b) = t.strip_suffix('+') {
            return Ok(Self::ball_plus(parse_rat(b)?, rank));
        }
        Ok(Self::rational(parse_rat(t)?, rank))
    }
}

impl Ord for GroupElem {
    /// Lexicographic order with infinity on top. Vectors of unequal rank are
    /// compared as if zero-padded; use [`GroupElem::lex_cmp`] to reject them.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupElem::Infinity, GroupElem::Infinity) => Ordering::Equal,
            (GroupElem::Infinity, _) => Ordering::Greater,
            (_, GroupElem::Infinity) => Ordering::Less,
            (GroupElem::Vector(a), GroupElem::Vector(b)) => {
                let zero = Rat::zero();
                let n = a.len().max(b.len());
                for i in 0..n {
                    let x = a.get(i).unwrap_or(&zero);
                    let y = b.get(i).unwrap_or(&zero);
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

impl PartialOrd for GroupElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &GroupElem {
    type Output = GroupElem;

    fn add(self, other: &GroupElem) -> GroupElem {
        match (self, other) {
            (GroupElem::Vector(a), GroupElem::Vector(b)) => {
                let n = a.len().max(b.len());
                let zero = Rat::zero();
                GroupElem::Vector(
                    (0..n)
                        .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
                        .collect(),
                )
            }
            _ => GroupElem::Infinity,
        }
    }
}

impl Add for GroupElem {
    type Output = GroupElem;

    fn add(self, other: GroupElem) -> GroupElem {
        &self + &other
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Infinity => f.write_str("inf"),
            GroupElem::Vector(v) => {
                let parts: Vec<String> = v.iter().map(fmt_rat).collect();
                write!(f, "({})", parts.join("|"))
            }
        }
    }
}

/// A quasi-cut `(D^L, D^R)` of the rationals, as realised by a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuasiCut {
    Principal(Rat),
    BallMinus(Rat),
    BallPlus(Rat),
    ImproperLow,
    ImproperHigh,
}

impl QuasiCut {
    /// The quasi-cut `D_x` with `D^L = {a <= x}` and `D^R = {a >= x}`.
    pub fn of(x: &GroupElem) -> Result<Self> {
        let v = x
            .slots()
            .ok_or_else(|| Error::Domain("infinity realises no quasi-cut".into()))?;
        if v[TOP].is_positive() {
            return Ok(QuasiCut::ImproperHigh);
        }
        if v[TOP].is_negative() {
            return Ok(QuasiCut::ImproperLow);
        }
        let b = v[MAIN].clone();
        Ok(match v[SUB..].iter().find(|q| !q.is_zero()) {
            None => QuasiCut::Principal(b),
            Some(q) if q.is_negative() => QuasiCut::BallMinus(b),
            Some(_) => QuasiCut::BallPlus(b),
        })
    }

    /// Whether the rational `a` lies in `D^L`.
    pub fn in_left(&self, a: &Rat) -> bool {
        match self {
            QuasiCut::Principal(b) => a <= b,
            QuasiCut::BallMinus(b) => a < b,
            QuasiCut::BallPlus(b) => a <= b,
            QuasiCut::ImproperLow => false,
            QuasiCut::ImproperHigh => true,
        }
    }

    /// Whether the rational `a` lies in `D^R`.
    pub fn in_right(&self, a: &Rat) -> bool {
        match self {
            QuasiCut::Principal(b) => a >= b,
            QuasiCut::BallMinus(b) => a >= b,
            QuasiCut::BallPlus(b) => a > b,
            QuasiCut::ImproperLow => true,
            QuasiCut::ImproperHigh => false,
        }
    }

    /// Canonical realisation of this quasi-cut.
    pub fn canonical(&self, rank: usize) -> GroupElem {
        match self {
            QuasiCut::Principal(a) => GroupElem::rational(a.clone(), rank),
            QuasiCut::BallMinus(b) => GroupElem::ball_minus(b.clone(), rank),
            QuasiCut::BallPlus(b) => GroupElem::ball_plus(b.clone(), rank),
            QuasiCut::ImproperLow => GroupElem::minus_infinity(rank),
            QuasiCut::ImproperHigh => GroupElem::infinity_minus(rank),
        }
    }
}

impl fmt::Display for QuasiCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiCut::Principal(a) => write!(f, "principal({})", fmt_rat(a)),
            QuasiCut::BallMinus(b) => write!(f, "ball_minus({})", fmt_rat(b)),
            QuasiCut::BallPlus(b) => write!(f, "ball_plus({})", fmt_rat(b)),
            QuasiCut::ImproperLow => f.write_str("improper_low"),
            QuasiCut::ImproperHigh => f.write_str("improper_high"),
        }
    }
}

/// `x ~sme y` iff both realise the same quasi-cut of the rationals.
pub fn sme_equiv(x: &GroupElem, y: &GroupElem) -> Result<bool> {
    Ok(QuasiCut::of(x)? == QuasiCut::of(y)?)
}

/// Canonical representative of the sme-class of `x`.
pub fn sme_canonical(x: &GroupElem) -> Result<GroupElem> {
    let rank = x.rank().ok_or_else(|| Error::Domain("infinity has no sme class".into()))?;
    Ok(QuasiCut::of(x)?.canonical(rank))
}

/// Index of a subgroup extension: a positive integer or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Index {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

/// A finitely generated subgroup `gZ` of the rationals, optionally extended by
/// one incommensurable element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    generator: Rat,
    extra: Option<GroupElem>,
}

impl Subgroup {
    pub fn integers() -> Self {
        Subgroup { generator: Rat::one(), extra: None }
    }

    pub fn cyclic(generator: Rat) -> Result<Self> {
        if !generator.is_positive() {
            return Err(Error::Domain("subgroup generator must be positive".into()));
        }
        Ok(Subgroup { generator, extra: None })
    }

    pub fn generator(&self) -> &Rat {
        &self.generator
    }

    pub fn incommensurable(&self) -> Option<&GroupElem> {
        self.extra.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.extra.is_none()
    }

    /// Exact membership of a rational in the rational part `gZ`.
    pub fn contains(&self, q: &Rat) -> bool {
        (q / &self.generator).is_integer()
    }

    /// `<H, gamma>` together with the index `(<H, gamma> : H)`.
    pub fn extend(&self, gamma: &GroupElem) -> Result<(Subgroup, Index)> {
        if !self.is_rational() {
            return Err(Error::Precondition("can only extend a purely rational subgroup".into()));
        }
        match gamma {
            GroupElem::Infinity => Err(Error::Domain("cannot extend a group by infinity".into())),
            g => match g.as_rational() {
                Some(q) if q.is_zero() => Ok((self.clone(), Index::Finite(1))),
                Some(q) => {
                    let new = rat_gcd(&self.generator, q);
                    let index = (&self.generator / &new)
                        .to_integer()
                        .to_u64()
                        .ok_or_else(|| Error::Domain("subgroup index overflows u64".into()))?;
                    Ok((Subgroup { generator: new, extra: None }, Index::Finite(index)))
                }
                None => Ok((
                    Subgroup { generator: self.generator.clone(), extra: Some(g.clone()) },
                    Index::Infinite,
                )),
            },
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.generator.is_one() {
            "Z".to_string()
        } else {
            format!("({})Z", fmt_rat(&self.generator))
        };
        match &self.extra {
            None => f.write_str(&base),
            Some(g) => write!(f, "<{base}, {g}>"),
        }
    }
}
