//! Exact inductive and limit valuations on Q[x] over the p-adic valuation.
//!
//! Values live in a finite-rank lexicographic group ([`GroupElem`]) that
//! also carries the cut elements `b-`, `b+`, `-oo` and `oo-`. Nodes of the
//! valuative tree are built by augmentation ([`Node::augment`],
//! [`Family::limit_augment`]) and compared structurally ([`tree::leq`],
//! [`tree::gcln`]).
//!
//! ```
//! use valtree::{examples, GroundValuation};
//!
//! let g = GroundValuation::new(7, 3).unwrap();
//! let chain = examples::vaquie_chain(&g).unwrap();
//! let nodes = chain.nodes().unwrap();
//! let [_, _, phi2, _] = examples::vaquie_polys(&g);
//! assert_eq!(nodes[3].eval(&phi2).unwrap().to_string(), "(0|301/30|0)");
//! ```

pub mod batch;
pub mod chain;
pub mod error;
pub mod examples;
pub mod family;
pub mod json;
pub mod newton;
pub mod node;
pub mod poly;
pub mod rational;
pub mod tree;
pub mod value_group;

pub use batch::Exec;
pub use chain::{Chain, Step, StepKind};
pub use error::{Error, Result};
pub use family::{Family, FamilyGen, RatSeq, Stability};
pub use node::{Node, NodeKind};
pub use poly::{GroundValuation, Poly, PolyEnv};
pub use rational::Rat;
pub use tree::TriState;
pub use value_group::{GroupElem, Index, QuasiCut, Subgroup};
