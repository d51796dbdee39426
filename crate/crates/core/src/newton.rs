//! phi-Newton polygons relative to a node.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::node::Node;
use crate::poly::Poly;
use crate::rational::Rat;
use crate::value_group::GroupElem;

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPoint {
    pub s: usize,
    pub value: GroupElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slope {
    pub slope: Rat,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolygon {
    pub points: Vec<NewtonPoint>,
    /// Indices into `points` of the lower-hull vertices, left to right.
    pub hull: Vec<usize>,
    pub slopes: Vec<Slope>,
    /// Some point value is not a plain rational; such points are left out of the hull.
    pub mixed: bool,
}

/// Points `(s, mu(a_s))` of the `phi`-expansion of `f` and their lower hull.
pub fn newton_polygon(mu: &Node, phi: &Poly, f: &Poly) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::Precondition("the zero polynomial has no Newton polygon".into()));
    }
    let mut points = Vec::new();
    for (s, a) in f.expand(phi)?.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let value = mu.eval(a)?;
        if value.is_infinite() {
            return Err(Error::Domain(format!("coefficient {a} has infinite value")));
        }
        points.push(NewtonPoint { s, value });
    }
    let rational: Vec<(usize, Rat)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.value.as_rational().map(|q| (i, q.clone())))
        .collect();
    let mixed = rational.len() != points.len();
    let mut hull: Vec<usize> = Vec::new();
    let cross = |o: &(usize, Rat), a: &(usize, Rat), b: &(usize, Rat)| -> Rat {
        let (ox, oy) = (Rat::from_integer(points[o.0].s.into()), &o.1);
        let (ax, ay) = (Rat::from_integer(points[a.0].s.into()), &a.1);
        let (bx, by) = (Rat::from_integer(points[b.0].s.into()), &b.1);
        (&ax - &ox) * (by - oy) - (ay - oy) * (&bx - &ox)
    };
    let mut stack: Vec<&(usize, Rat)> = Vec::new();
    for pt in &rational {
        while stack.len() >= 2 && cross(stack[stack.len() - 2], stack[stack.len() - 1], pt) <= Rat::zero() {
            stack.pop();
        }
        stack.push(pt);
    }
    hull.extend(stack.iter().map(|p| p.0));
    let slopes = hull
        .windows(2)
        .map(|w| {
            let (a, b) = (&points[w[0]], &points[w[1]]);
            let len = b.s - a.s;
            let dy = b.value.as_rational().expect("rational") - a.value.as_rational().expect("rational");
            Slope { slope: dy / Rat::from_integer(len.into()), length: len }
        })
        .collect();
    Ok(NewtonPolygon { points, hull, slopes, mixed })
}

/// `min_s value(s) + s * gamma`, the polygon's support function.
pub fn value_from_polygon(npg: &NewtonPolygon, gamma: &GroupElem) -> GroupElem {
    let pts: Box<dyn Iterator<Item = &NewtonPoint>> = if npg.mixed {
        Box::new(npg.points.iter())
    } else {
        Box::new(npg.hull.iter().map(|&i| &npg.points[i]))
    };
    pts.map(|p| if p.s == 0 { p.value.clone() } else { &p.value + &gamma.times(p.s) })
        .min()
        .unwrap_or(GroupElem::Infinity)
}

impl NewtonPolygon {
    /// A small text rendering: one row per distinct value, one column per `s`.
    pub fn sketch(&self) -> String {
        let max_s = self.points.iter().map(|p| p.s).max().unwrap_or(0);
        let mut vals: Vec<&GroupElem> = self.points.iter().map(|p| &p.value).collect();
        vals.sort();
        vals.dedup();
        let mut out = String::new();
        for v in vals.iter().rev() {
            let mut row = format!("{:>14} |", v.to_string());
            for s in 0..=max_s {
                let hit = self.points.iter().enumerate().find(|(_, p)| p.s == s && p.value == **v);
                row.push_str(match hit {
                    Some((i, _)) if self.hull.contains(&i) => " *",
                    Some(_) => " o",
                    None => "  ",
                });
            }
            out.push_str(&row);
            out.push('\n');
        }
        out.push_str(&format!("{:>14} +{}\n", "", "--".repeat(max_s + 1)));
        out.push_str(&format!("{:>14}  s = 0..{}\n", "", max_s));
        out
    }
}
