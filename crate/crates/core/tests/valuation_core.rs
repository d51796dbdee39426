mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use valtree::examples::{hensel_family, vaquie_chain, vaquie_polys};
use valtree::node::Minimality;
use valtree::rational::{frac, rat};
use valtree::{Error, GroupElem, Index, Node, Poly, Rat};

fn chain_nodes(p: u64) -> Vec<Node> {
    vaquie_chain(&ground(p)).unwrap().nodes().unwrap()
}

fn binom(n: usize, k: usize) -> Rat {
    (0..k).fold(Rat::one(), |acc, i| acc * rat((n - i) as i64) / rat((i + 1) as i64))
}

/// `min_s v(f^(s)(a) / s!) + s * delta`, from the derivative formula.
fn depth_zero_oracle(f: &Poly, a: &Rat, delta: &GroupElem) -> GroupElem {
    let g = ground(7);
    let n = f.coeffs().len();
    let mut best = GroupElem::Infinity;
    for s in 0..n {
        let mut c = Rat::zero();
        for k in s..n {
            let mut pw = Rat::one();
            for _ in 0..k - s {
                pw *= a;
            }
            c += binom(k, s) * f.coeff(k) * pw;
        }
        if c.is_zero() {
            continue;
        }
        let t = &v_oracle(&c, &g) + &delta.scalar_mul(&rat(s as i64)).unwrap();
        best = best.min(t);
    }
    best
}

#[test]
fn evaluation_examples() {
    let g = ground(7);
    let nodes = chain_nodes(7);
    let [_, phi1, phi2, phi3] = vaquie_polys(&g);
    assert_eq!(nodes[0].eval(&phi1).unwrap().to_string(), "(0|3|0)");
    assert_eq!(nodes[3].eval(&phi2).unwrap().to_string(), "(0|301/30|0)");
    assert_eq!(nodes[2].eval(&phi3).unwrap().to_string(), "(0|301/15|0)");
    assert!(nodes[3].eval(&phi3).unwrap().is_infinite());
    let w = Node::depth_zero(&g, rat(4), GroupElem::Infinity).unwrap();
    assert!(w.eval(&Poly::x_minus(rat(4))).unwrap().is_infinite());
    assert!(w.is_leaf());
    let root = Node::root(&g);
    assert_eq!(root.eval(&Poly::from_ints(&[0, 7, 0, 5])).unwrap().to_string(), "(-3|0|0)");
    assert_eq!(root.eval(&Poly::from_ints(&[49])).unwrap().to_string(), "(0|2|0)");
}

#[test]
fn degrees_singular_values_and_ramification() {
    let g = ground(7);
    let nodes = chain_nodes(7);
    let degs: Vec<usize> = nodes.iter().map(|n| n.degree()).collect();
    assert_eq!(degs, [1, 5, 15, 30]);
    assert_eq!(nodes[2].sv().to_string(), "(0|301/30|0)");
    let e: Vec<Index> = nodes[..3].iter().map(|n| n.e_rel().unwrap()).collect();
    assert_eq!(e, [Index::Finite(5), Index::Finite(3), Index::Finite(2)]);
    assert_eq!(nodes[2].value_group().unwrap().generator(), &frac(1, 30));
    let w = Node::depth_zero(&g, rat(0), GroupElem::ball_minus(rat(1), 3)).unwrap();
    assert_eq!(w.e_rel().unwrap(), Index::Infinite);
    assert_eq!(w.sv(), &GroupElem::ball_minus(rat(1), 3));
    let depths: Vec<usize> = nodes.iter().map(|n| n.depth()).collect();
    assert_eq!(depths, [0, 1, 2, 3]);
}

#[test]
fn graded_divisibility_probe() {
    let g = ground(7);
    let nodes = chain_nodes(7);
    let [phi0, phi1, phi2, _] = vaquie_polys(&g);
    assert!(!nodes[0].divides_probe(&phi1, &phi0).unwrap());
    assert!(nodes[0].divides_probe(&phi1, &phi1).unwrap());
    let f = &phi2.pow(2) + &Poly::constant(g.p_pow(25));
    assert!(nodes[1].divides_probe(&phi2, &f).unwrap());
    assert!(!nodes[1].divides_probe(&phi2, &Poly::constant(g.p_pow(25))).unwrap());
    let w = Node::depth_zero(&g, rat(0), GroupElem::ball_minus(rat(1), 3)).unwrap();
    assert_eq!(w.divides_probe(&Poly::x(), &Poly::x()), Err(Error::RankExhausted { rank: 3 }));
    let g4 = valtree::GroundValuation::new(7, 4).unwrap();
    let w4 = Node::depth_zero(&g4, rat(0), GroupElem::ball_minus(rat(1), 4)).unwrap();
    assert!(w4.divides_probe(&Poly::x(), &Poly::x()).unwrap());
}

#[test]
fn minimality_oracle() {
    let g = ground(7);
    let nodes = chain_nodes(7);
    let [phi0, phi1, _, _] = vaquie_polys(&g);
    assert!(matches!(nodes[0].is_minimal_oracle(&phi0, 6, 3).unwrap(), Minimality::Confirmed { .. }));
    assert!(matches!(nodes[0].is_minimal_oracle(&phi1, 10, 4).unwrap(), Minimality::Confirmed { .. }));
    match nodes[1].is_minimal_oracle(&phi0.pow(5), 5, 3).unwrap() {
        Minimality::Refuted { witness } => assert_eq!(witness, phi1),
        other => panic!("x^5 accepted as minimal: {other:?}"),
    }
}

#[test]
fn augmentation_preconditions() {
    let g = ground(7);
    let nodes = chain_nodes(7);
    let mu0 = &nodes[0];
    let [_, phi1, _, _] = vaquie_polys(&g);
    let bad = |r: valtree::Result<Node>| matches!(r, Err(Error::Precondition(_)));
    assert!(bad(mu0.augment(&phi1.scale(&rat(2)), g.rational(rat(4)))));
    assert!(bad(mu0.augment(&phi1, g.rational(rat(3)))));
    assert!(bad(mu0.augment(&Poly::x().pow(5), g.rational(rat(4)))));
    assert!(bad(mu0.augment(&Poly::from_ints(&[1, 0, 1]), g.rational(rat(4)))));
    assert!(bad(nodes[3].augment(&Poly::x().pow(31), GroupElem::Infinity)));
    let g4 = valtree::GroundValuation::new(7, 4).unwrap();
    assert!(matches!(mu0.augment(&phi1, GroupElem::rational(rat(4), 4)), Err(Error::RankMismatch { .. })));
    assert!(Node::depth_zero(&g4, rat(0), GroupElem::rational(rat(1), 3)).is_err());
    let root = Node::root(&g);
    let w = root.augment(&Poly::x_minus(rat(2)), g.rational(frac(1, 2))).unwrap();
    assert!(valtree::tree::node_eq(&w, &Node::depth_zero(&g, rat(2), g.rational(frac(1, 2))).unwrap()).unwrap());
}

#[test]
fn strong_witnesses_are_minimal_and_augmentable() {
    let g = ground(7);
    let nodes = chain_nodes(7);
    let mut bases = nodes[..3].to_vec();
    bases.push(Node::depth_zero(&g, rat(1), g.rational(rat(2))).unwrap());
    bases.push(Node::depth_zero(&g, rat(0), g.rational(frac(2, 3))).unwrap());
    for b in &bases {
        let phi = b.strong_key_witness().unwrap();
        assert!(phi.deg0() > b.degree(), "{b}: {phi}");
        assert!(matches!(b.is_minimal_oracle(&phi, phi.deg0() + 2, 2).unwrap(), Minimality::Confirmed { .. }), "{b}: {phi}");
        let up = b.augment(&phi, &b.eval(&phi).unwrap() + &g.rational(frac(1, 7))).unwrap();
        assert!(valtree::tree::lt(b, &up).unwrap());
    }
    let target = frac(301, 15);
    let m = nodes[1].monomial_with_value(&target).unwrap();
    assert_eq!(nodes[1].eval(&m).unwrap(), g.rational(target));
}

#[test]
fn limit_node_reports_horizon_exhaustion() {
    let g = ground(7);
    let fam = hensel_family(&g, Poly::from_ints(&[-2, 0, 1]), 3, 3).unwrap();
    let mu = fam.limit_augment(&Poly::from_ints(&[-2, 0, 1]), GroupElem::infinity_minus(3)).unwrap();
    assert_eq!(mu.eval(&Poly::x_minus(rat(3))).unwrap(), g.rational(rat(1)));
    assert_eq!(mu.eval(&Poly::x_minus(rat(108))), Err(Error::StabilityHorizon { tried: 3 }));
    let long = fam.with_horizon(6).unwrap();
    let mu = long.limit_augment(&Poly::from_ints(&[-2, 0, 1]), GroupElem::infinity_minus(3)).unwrap();
    assert_eq!(mu.eval(&Poly::x_minus(rat(108))).unwrap(), g.rational(rat(3)));
}

proptest! {
    #[test]
    fn depth_zero_matches_derivative_formula(seed in any::<u64>(), a in -60i64..=60, k in -6i64..=18) {
        let g = ground(7);
        let mut r = rng(seed);
        let f = random_poly(&mut r, &g, 10, 4);
        let a = frac(a, [1, 1, 2, 3][(seed % 4) as usize]);
        let delta = g.rational(frac(k, 6));
        let w = Node::depth_zero(&g, a.clone(), delta.clone()).unwrap();
        prop_assert_eq!(w.eval(&f).unwrap(), depth_zero_oracle(&f, &a, &delta));
    }

    #[test]
    fn chain_values_increase_and_agree_below_key_degree(seed in any::<u64>()) {
        let g = ground(7);
        let nodes = chain_nodes(7);
        let mut r = rng(seed);
        let f = random_poly(&mut r, &g, 35, 6);
        for w in nodes.windows(2) {
            let (a, b) = (w[0].eval(&f).unwrap(), w[1].eval(&f).unwrap());
            prop_assert!(a <= b);
            if f.deg0() < w[1].degree() {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn evaluation_is_a_valuation(seed in any::<u64>()) {
        let g = ground(11);
        let nodes = chain_nodes(11);
        let mut r = rng(seed);
        let f = random_poly(&mut r, &g, 20, 4);
        let h = random_poly(&mut r, &g, 20, 4);
        for mu in &nodes[..3] {
            let (vf, vh) = (mu.eval(&f).unwrap(), mu.eval(&h).unwrap());
            prop_assert_eq!(mu.eval(&(&f * &h)).unwrap(), &vf + &vh);
            prop_assert!(mu.eval(&(&f + &h)).unwrap() >= vf.min(vh));
            prop_assert_eq!(mu.eval(&Poly::one()).unwrap(), g.zero());
        }
    }
}
