//! Dense univariate polynomials over Q and the p-adic ground valuation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, parse_rat, rat, rat_ord, Rat};
use crate::value_group::GroupElem;

/// Polynomial with exact rational coefficients; `coeffs[i]` multiplies `x^i`.
/// The coefficient vector never ends in a zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    /// `x - a`.
    pub fn x_minus(a: Rat) -> Self {
        Self::from_coeffs(vec![-a, Rat::one()])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for expansion bookkeeping.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval_at(&self, a: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * a + c)
    }

    /// `(F, D)` with integer `F` and `self = F / D`.
    pub(crate) fn to_integral(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (ints, den)
    }

    pub(crate) fn from_integral(ints: Vec<BigInt>, den: &BigInt) -> Self {
        Self::from_coeffs(ints.into_iter().map(|n| Rat::new(n, den.clone())).collect())
    }

    fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Euclidean division by a monic polynomial.
    pub fn div_rem_monic(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if !d.is_monic() {
            return Err(Error::Precondition(format!("divisor {d} is not monic")));
        }
        let dd = d.deg0();
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        if d.is_integral() {
            let (mut rem, den) = self.to_integral();
            let dc: Vec<BigInt> = d.coeffs.iter().map(|c| c.numer().clone()).collect();
            let mut quot = vec![BigInt::zero(); rem.len() - dd];
            for k in (0..quot.len()).rev() {
                let c = std::mem::take(&mut rem[k + dd]);
                if c.is_zero() {
                    continue;
                }
                for (j, dj) in dc[..dd].iter().enumerate() {
                    if !dj.is_zero() {
                        rem[k + j] -= &c * dj;
                    }
                }
                quot[k] = c;
            }
            rem.truncate(dd);
            return Ok((Poly::from_integral(quot, &den), Poly::from_integral(rem, &den)));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[k + j] -= &c * dj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// The `phi`-adic expansion `f = sum a_s phi^s` with `deg a_s < deg phi`.
    /// Empty for `f = 0`.
    pub fn expand(&self, phi: &Poly) -> Result<Vec<Poly>> {
        if !phi.is_monic() || phi.deg0() == 0 {
            return Err(Error::Precondition(format!(
                "expansion base {phi} must be monic of positive degree"
            )));
        }
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.div_rem_monic(phi)?;
            out.push(r);
            cur = q;
        }
        Ok(out)
    }

    /// Reassembles `sum a_s phi^s` (Horner in `phi`).
    pub fn from_expansion(parts: &[Poly], phi: &Poly) -> Poly {
        parts.iter().rev().fold(Poly::zero(), |acc, a| &(&acc * phi) + a)
    }

    /// Smallest `s` with `a_s != 0`; `None` (the infinity sentinel) for `f = 0`.
    pub fn ord_phi(&self, phi: &Poly) -> Result<Option<usize>> {
        Ok(self.expand(phi)?.iter().position(|a| !a.is_zero()))
    }

    /// Parses a coefficient list `[c0, c1, ...]` or an expression such as
    /// `x^5 + p^3`.
    pub fn parse(s: &str, env: &PolyEnv) -> Result<Poly> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if inner.trim().is_empty() {
                return Ok(Poly::zero());
            }
            let cs = inner.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
            return Ok(Poly::from_coeffs(cs));
        }
        ExprParser::new(t, env)?.parse()
    }

    /// Coefficient list form, `[c0, c1, ...]`.
    pub fn to_list_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rat).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = match i {
                0 => String::new(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            };
            if body.is_empty() {
                f.write_str(&fmt_rat(&a))?;
            } else if a.is_one() {
                f.write_str(&body)?;
            } else if a.is_integer() {
                write!(f, "{}*{}", fmt_rat(&a), body)?;
            } else {
                write!(f, "({})*{}", fmt_rat(&a), body)?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let (a, da) = self.to_integral();
        let (b, db) = o.to_integral();
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Poly::from_integral(out, &(da * db))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// The p-adic valuation `v_p` on Q, with values in the main slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundValuation {
    prime: u64,
    p: BigInt,
    rank: usize,
}

impl GroundValuation {
    pub fn new(prime: u64, rank: usize) -> Result<Self> {
        if !crate::rational::is_prime(prime) {
            return Err(Error::Config(format!("{prime} is not a prime")));
        }
        if rank < crate::value_group::DEFAULT_RANK {
            return Err(Error::Config(format!("rank must be at least 3, got {rank}")));
        }
        Ok(GroundValuation { prime, p: BigInt::from(prime), rank })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn p_rat(&self) -> Rat {
        Rat::from_integer(self.p.clone())
    }

    /// `p^k` for any integer `k`.
    pub fn p_pow(&self, k: i64) -> Rat {
        crate::rational::prime_power(&self.p, k)
    }

    pub fn ord(&self, q: &Rat) -> Option<i64> {
        (!q.is_zero()).then(|| rat_ord(q, &self.p))
    }

    /// `v_p(q)` as `(0|n|0)`, infinity for `q = 0`.
    pub fn v(&self, q: &Rat) -> GroupElem {
        match self.ord(q) {
            None => GroupElem::Infinity,
            Some(n) => GroupElem::rational(rat(n), self.rank),
        }
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem::zero(self.rank)
    }

    pub fn rational(&self, q: Rat) -> GroupElem {
        GroupElem::rational(q, self.rank)
    }

    /// Parses a group element at this rank.
    pub fn elem(&self, s: &str) -> Result<GroupElem> {
        GroupElem::parse(s, self.rank)
    }

    pub fn env(&self) -> PolyEnv {
        PolyEnv::new(self.prime)
    }
}

/// Symbols available when parsing polynomial expressions: `x`, `p` and any
/// named polynomials.
#[derive(Clone, Debug, Default)]
pub struct PolyEnv {
    prime: Option<u64>,
    names: BTreeMap<String, Poly>,
}

impl PolyEnv {
    pub fn new(prime: u64) -> Self {
        PolyEnv { prime: Some(prime), names: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, f: Poly) -> Self {
        self.names.insert(name.to_string(), f);
        self
    }

    pub fn insert(&mut self, name: &str, f: Poly) {
        self.names.insert(name.to_string(), f);
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    env: &'a PolyEnv,
    src: &'a str,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str, env: &'a PolyEnv) -> Result<Self> {
        let mut toks = Vec::new();
        let cs: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = cs[start..i].iter().collect();
                toks.push(Tok::Num(s.parse().expect("digits")));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(cs[start..i].iter().collect()));
            } else if "+-*/^()".contains(c) {
                toks.push(Tok::Op(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected {c:?} in polynomial {src:?}")));
            }
        }
        Ok(ExprParser { toks, pos: 0, env, src })
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in polynomial {:?}", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Poly> {
        let f = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(f)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                match d.degree() {
                    Some(0) => acc = acc.scale(&(Rat::one() / d.coeff(0))),
                    _ => return Err(self.err("division by a non-constant or zero")),
                }
            } else if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => Ok(Poly::x()),
                    "p" => match self.env.prime {
                        Some(p) => Ok(Poly::constant(Rat::from_integer(p.into()))),
                        None => Err(self.err("symbol p used without a prime")),
                    },
                    other => self
                        .env
                        .names
                        .get(other)
                        .cloned()
                        .ok_or_else(|| self.err(&format!("unknown symbol {other:?}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let f = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(f)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}
