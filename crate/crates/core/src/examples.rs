//! Built-in chains and families used by the CLI, tests and benches.

use crate::chain::{Chain, Step};
use crate::error::{Error, Result};
use crate::family::{Chi, Family, FamilyGen, RatSeq, DEFAULT_HORIZON};
use crate::node::Node;
use crate::poly::{GroundValuation, Poly};
use crate::rational::{frac, rat};
use crate::value_group::GroupElem;

/// `phi_0 = x`, `phi_1 = x^5 + p^3`, `phi_2 = phi_1^3 + p^10`,
/// `phi_3 = phi_2^2 + p^11 phi_0^4 phi_1^2`.
pub fn vaquie_polys(g: &GroundValuation) -> [Poly; 4] {
    let p = |k: i64| Poly::constant(g.p_pow(k));
    let phi0 = Poly::x();
    let phi1 = &phi0.pow(5) + &p(3);
    let phi2 = &phi1.pow(3) + &p(10);
    let phi3 = &phi2.pow(2) + &(&(&p(11) * &phi0.pow(4)) * &phi1.pow(2));
    [phi0, phi1, phi2, phi3]
}

/// `w_{0,3/5} -> [.; phi_1, 10/3] -> [.; phi_2, 301/30] -> [.; phi_3, inf]`.
///
/// The primes 2, 3 and 5 divide constants of the expanded polynomials and
/// are rejected.
pub fn vaquie_chain(g: &GroundValuation) -> Result<Chain> {
    if [2, 3, 5].contains(&g.prime()) {
        return Err(Error::Config(format!(
            "prime {} divides example constants; use a prime other than 2, 3, 5",
            g.prime()
        )));
    }
    let [_, phi1, phi2, phi3] = vaquie_polys(g);
    let mu0 = Node::depth_zero(g, rat(0), g.rational(frac(3, 5)))?;
    Ok(Chain::new(
        mu0,
        vec![
            Step::ordinary(phi1, g.rational(frac(10, 3))),
            Step::ordinary(phi2, g.rational(frac(301, 30))),
            Step::ordinary(phi3, GroupElem::Infinity),
        ],
    ))
}

/// `rho_i = w_{a_i, i}` with `a_i` the Hensel iterates of a simple root of
/// `poly` starting at `seed`.
pub fn hensel_family(g: &GroundValuation, poly: Poly, seed: i64, horizon: usize) -> Result<Family> {
    let rule = FamilyGen::AugmentationRule {
        base: Node::root(g),
        chi: Chi::Shift(RatSeq::HenselRoot { poly, seed: rat(seed) }),
        beta: RatSeq::Linear { start: rat(1), step: rat(1) },
    };
    Family::new(g, rule, horizon, None)
}

/// The square-root-of-two family over `Q_7`: `a_1 = 3, a_2 = 10, a_3 = 108, ...`.
pub fn sqrt2_family(g: &GroundValuation) -> Result<Family> {
    if g.prime() != 7 {
        return Err(Error::Config("the square-root-of-two family is defined for p = 7".into()));
    }
    hensel_family(g, Poly::from_ints(&[-2, 0, 1]), 3, DEFAULT_HORIZON)
}

/// `rho_i = w_{0, 1 - 1/2^i}`, whose limit key polynomial `x` has the
/// stable degree.
pub fn inessential_family(g: &GroundValuation) -> Result<Family> {
    let rule = FamilyGen::AugmentationRule {
        base: Node::root(g),
        chi: Chi::Fixed(Poly::x()),
        beta: RatSeq::Geometric { limit: rat(1), scale: rat(1), ratio: frac(1, 2) },
    };
    Family::new(g, rule, DEFAULT_HORIZON, None)
}
