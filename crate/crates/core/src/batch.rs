//! Data-parallel batch operations with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] runs on
//! the rayon pool; without it every call runs sequentially.

use crate::error::Result;
use crate::node::Node;
use crate::poly::Poly;
use crate::value_group::GroupElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `items.map(f)` preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Like [`Exec::map`] over fallible results, returning the first error in order.
    pub fn try_map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}

/// `mu(f)` for every `f`.
pub fn eval_many(exec: Exec, mu: &Node, fs: &[Poly]) -> Result<Vec<GroupElem>> {
    exec.try_map(fs, |f| mu.eval(f))
}

/// First pair violating `mu(fg) = mu(f) + mu(g)` or `mu(f + g) >= min`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomFailure {
    pub index: usize,
    pub multiplicative: bool,
    pub f: Poly,
    pub g: Poly,
}

/// Checks the valuation axioms on every pair; returns the failures in order.
pub fn check_axioms(exec: Exec, mu: &Node, pairs: &[(Poly, Poly)]) -> Result<Vec<AxiomFailure>> {
    let indexed: Vec<(usize, &(Poly, Poly))> = pairs.iter().enumerate().collect();
    let res = exec.try_map(&indexed, |(i, (f, g))| -> Result<Vec<AxiomFailure>> {
        let vf = mu.eval(f)?;
        let vg = mu.eval(g)?;
        let mut out = Vec::new();
        if mu.eval(&(f * g))? != &vf + &vg {
            out.push(AxiomFailure { index: *i, multiplicative: true, f: f.clone(), g: g.clone() });
        }
        if mu.eval(&(f + g))? < vf.min(vg) {
            out.push(AxiomFailure { index: *i, multiplicative: false, f: f.clone(), g: g.clone() });
        }
        Ok(out)
    })?;
    Ok(res.into_iter().flatten().collect())
}

/// `leq` over many pairs.
pub fn leq_many(exec: Exec, pairs: &[(Node, Node)]) -> Result<Vec<bool>> {
    exec.try_map(pairs, |(a, b)| crate::tree::leq(a, b))
}
