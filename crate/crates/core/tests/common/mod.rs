#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valtree::rational::{frac, rat};
use valtree::{GroundValuation, GroupElem, Node, Poly, Rat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ground(p: u64) -> GroundValuation {
    GroundValuation::new(p, 3).unwrap()
}

pub fn q(s: &str) -> Rat {
    valtree::rational::parse_rat(s).unwrap()
}

/// p-adic order of a nonzero rational by repeated trial division.
pub fn ord_oracle(x: &Rat, p: u64) -> i64 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0;
        loop {
            let (d, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = d;
            k += 1;
        }
    };
    count(x.numer()) - count(x.denom())
}

pub fn v_oracle(x: &Rat, g: &GroundValuation) -> GroupElem {
    if x.is_zero() {
        GroupElem::Infinity
    } else {
        g.rational(rat(ord_oracle(x, g.prime())))
    }
}

/// Random polynomial of degree at most `max_deg` with coefficients
/// `u * p^j`, `|u| <= 6`, `0 <= j <= height`.
pub fn random_poly(r: &mut ChaCha8Rng, g: &GroundValuation, max_deg: usize, height: i64) -> Poly {
    loop {
        let deg = r.gen_range(0..=max_deg);
        let coeffs: Vec<Rat> = (0..=deg)
            .map(|_| {
                if r.gen_bool(0.25) {
                    Rat::zero()
                } else {
                    let u: i64 = *[-6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6].choose(r).unwrap();
                    rat(u) * g.p_pow(r.gen_range(0..=height))
                }
            })
            .collect();
        let f = Poly::from_coeffs(coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Residues `r_k` with `r_k^2 = 2 mod 7^k` and `r_1 = 3`, found digit by digit.
pub fn sqrt2_residue(k: u32) -> BigInt {
    let seven = BigInt::from(7);
    let mut r = BigInt::from(3);
    for j in 1..k {
        let m = seven.pow(j);
        let modulus = seven.pow(j + 1);
        r = (0..7)
            .map(|d| &r + BigInt::from(d) * &m)
            .find(|c: &BigInt| (c * c - BigInt::from(2)).mod_floor(&modulus).is_zero())
            .expect("a lifting digit exists");
    }
    r
}

/// `v_7(r - sqrt 2)` for a rational `r`, when below `k`.
pub fn ord_minus_sqrt2(r: &Rat, k: u32) -> Option<i64> {
    if !r.is_zero() && ord_oracle(r, 7) < 0 {
        return Some(ord_oracle(r, 7));
    }
    let modulus = BigInt::from(7).pow(k);
    let den_inv = r.denom().modinv(&modulus).expect("denominator prime to 7");
    let rep = (r.numer() * den_inv).mod_floor(&modulus);
    let d = rep - sqrt2_residue(k);
    if d.is_zero() {
        return None;
    }
    let o = ord_oracle(&Rat::from_integer(d), 7);
    (o < k as i64).then_some(o)
}

/// `(s, init)` with `phi^s || f` and `init = (f / phi^s) mod phi`.
pub fn ord_and_init(f: &Poly, phi: &Poly) -> (usize, Poly) {
    let mut cur = f.clone();
    let mut s = 0;
    loop {
        let (quo, rem) = cur.div_rem_monic(phi).unwrap();
        if !rem.is_zero() {
            return (s, rem);
        }
        cur = quo;
        s += 1;
    }
}

pub fn abs(x: &GroupElem) -> GroupElem {
    let n = x.neg().unwrap();
    if n > *x {
        n
    } else {
        x.clone()
    }
}

fn pick<T: Clone>(r: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs.choose(r).unwrap().clone()
}

/// `w_{a,delta}` with `a` from a small set of nearby centres and `delta = k/6`.
pub fn random_depth_zero(r: &mut ChaCha8Rng, g: &GroundValuation) -> Node {
    let a = rat(pick(r, &[0, 1, 7, 8, 14, 49, 50, 3]));
    let k = r.gen_range(0..=12);
    Node::depth_zero(g, a, g.rational(frac(k, 6))).unwrap()
}

/// A strong augmentation of `base` by its witness key polynomial, with a
/// value outside the base value group when `fresh` is set.
pub fn random_strong_step(r: &mut ChaCha8Rng, base: &Node, fresh: bool) -> Node {
    let g = base.ground();
    let phi = base.strong_key_witness().expect("commensurable base has a witness");
    let l = (phi.deg0() / base.degree()) as i64;
    let sv = base.sv().as_rational().unwrap().clone();
    let den = base.value_group().unwrap().generator().denom().clone();
    let step = if fresh {
        let qd = pick(r, &[2i64, 3]);
        let j = pick(r, &[1i64, 2 * qd - 1]);
        Rat::new(BigInt::from(j), den * BigInt::from(qd))
    } else {
        frac(r.gen_range(1..=4), pick(r, &[1, 2, 3, 5]))
    };
    let gamma = g.rational(sv * rat(l) + step);
    base.augment(&phi, gamma).unwrap()
}

/// Nodes of depth at most two, built on a small set of shared bases.
pub fn random_node(r: &mut ChaCha8Rng, g: &GroundValuation) -> Node {
    match r.gen_range(0..20) {
        0 => Node::root(g),
        1..=7 => random_depth_zero(r, g),
        8..=14 => {
            let b = random_depth_zero(r, g);
            random_strong_step(r, &b, true)
        }
        _ => {
            let b = random_depth_zero(r, g);
            let m = random_strong_step(r, &b, true);
            random_strong_step(r, &m, false)
        }
    }
}

/// Sorted rationals with denominator at most `d` in `[-bound, bound]`.
pub fn rational_grid(d: i64, bound: i64) -> Vec<Rat> {
    let mut out = Vec::new();
    for den in 1..=d {
        for num in -bound * den..=bound * den {
            if num.gcd(&den).is_one() {
                out.push(frac(num, den));
            }
        }
    }
    out.sort();
    out
}
