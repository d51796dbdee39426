mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use valtree::examples::vaquie_polys;
use valtree::rational::{frac, rat};
use valtree::{Poly, Rat};

fn coeff() -> impl Strategy<Value = Rat> {
    prop_oneof![
        2 => Just(rat(0)),
        5 => (-50i64..=50).prop_map(rat),
        2 => (-50i64..=50, 1i64..=30).prop_map(|(n, d)| frac(n, d)),
        1 => (-3i64..=3, 0i64..=8).prop_map(|(u, k)| rat(u) * ground(7).p_pow(k)),
    ]
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(coeff(), 0..=max_len).prop_map(Poly::from_coeffs)
}

fn monic(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(coeff(), 1..=max_deg).prop_map(|mut c| {
        c.push(rat(1));
        Poly::from_coeffs(c)
    })
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (-10_000i64..=10_000, 1i64..=10_000).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| frac(n, d)))
}

proptest! {
    #[test]
    fn expansion_reassembles(f in poly(31), phi in monic(6)) {
        let parts = f.expand(&phi).unwrap();
        prop_assert!(parts.iter().all(|a| a.is_zero() || a.deg0() < phi.deg0()));
        prop_assert_eq!(Poly::from_expansion(&parts, &phi), f);
    }

    #[test]
    fn division_identity(f in poly(25), d in monic(8)) {
        let (q, r) = f.div_rem_monic(&d).unwrap();
        prop_assert!(r.is_zero() || r.deg0() < d.deg0());
        prop_assert_eq!(&(&q * &d) + &r, f);
    }

    #[test]
    fn product_agrees_with_pointwise_evaluation(f in poly(12), g in poly(12), t in -6i64..=6) {
        let t = frac(t, 5);
        let fg = &f * &g;
        prop_assert_eq!(fg.eval_at(&t), f.eval_at(&t) * g.eval_at(&t));
        prop_assert_eq!(fg, &g * &f);
    }

    #[test]
    fn ground_valuation_is_multiplicative(a in nonzero_rat(), b in nonzero_rat()) {
        let g = ground(7);
        prop_assert_eq!(g.ord(&a).unwrap(), ord_oracle(&a, 7));
        prop_assert_eq!(g.v(&(&a * &b)), &g.v(&a) + &g.v(&b));
        let s = &a + &b;
        if !s.is_zero() {
            prop_assert!(g.v(&s) >= g.v(&a).min(g.v(&b)));
        }
    }

    #[test]
    fn display_parses_back(f in poly(10)) {
        let env = ground(7).env();
        prop_assert_eq!(Poly::parse(&f.to_string(), &env).unwrap(), f.clone());
        prop_assert_eq!(Poly::parse(&f.to_list_string(), &env).unwrap(), f);
    }
}

#[test]
fn ground_valuation_values() {
    let g = ground(7);
    assert_eq!(g.v(&rat(98)).to_string(), "(0|2|0)");
    assert_eq!(g.v(&frac(3, 49)).to_string(), "(0|-2|0)");
    assert!(g.v(&rat(0)).is_infinite());
    assert!(valtree::GroundValuation::new(12, 3).is_err());
    assert!(valtree::GroundValuation::new(7, 2).is_err());
}

#[test]
fn worked_example_expansions() {
    for p in [7, 11, 13] {
        let g = ground(p);
        let [phi0, phi1, phi2, phi3] = vaquie_polys(&g);
        let parts = phi2.expand(&phi1).unwrap();
        let want = [Poly::constant(g.p_pow(10)), Poly::zero(), Poly::zero(), Poly::one()];
        assert_eq!(parts, want);
        assert_eq!(phi2.pow(2).ord_phi(&phi2).unwrap(), Some(2));
        assert_eq!((&phi2.pow(2) + &Poly::one()).ord_phi(&phi2).unwrap(), Some(0));
        assert_eq!(phi0.expand(&phi1).unwrap(), vec![phi0.clone()]);
        let pp = |k: i64| g.p_pow(k);
        let q = g.p_rat();
        let terms: [(Rat, usize); 10] = [
            (rat(1), 30),
            (rat(6) * pp(3), 25),
            (rat(15) * pp(6), 20),
            (rat(2) * pp(9) * (&q + rat(10)), 15),
            (pp(11), 14),
            ((rat(6) * &q + rat(15)) * pp(12), 10),
            (rat(2) * pp(14), 9),
            (rat(6) * (&q + rat(1)) * pp(15), 5),
            (pp(17), 4),
            (pp(18) * (&q + rat(1)) * (&q + rat(1)), 0),
        ];
        let expanded = terms.iter().fold(Poly::zero(), |acc, (c, k)| &acc + &Poly::monomial(c.clone(), *k));
        assert_eq!(phi3, expanded, "p = {p}");
    }
}

#[test]
fn named_polynomials_in_expressions() {
    let g = ground(7);
    let [_, phi1, phi2, _] = vaquie_polys(&g);
    let env = g.env().with("phi1", phi1.clone());
    assert_eq!(Poly::parse("phi1^3 + p^10", &env).unwrap(), phi2);
    assert_eq!(Poly::parse("x^5+343", &env).unwrap(), phi1);
    assert!(Poly::parse("phi9 + 1", &env).is_err());
    assert!(Poly::parse("x^", &env).is_err());
}
