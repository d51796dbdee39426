//! JSON documents for nodes, families and chains.
//!
//! Every number is an exact rational string; group elements use their
//! textual form (`"(0|301/30|0)"`, `"inf"`, `"oo-"`, ...), polynomials are
//! coefficient lists `["343", "0", "0", "0", "0", "1"]` or expression strings.

use serde::{Deserialize, Serialize};

use crate::chain::{Chain, Step, StepKind};
use crate::error::{Error, Result};
use crate::family::{Chi, Family, FamilyGen, RatSeq, DEFAULT_HORIZON};
use crate::node::{Node, NodeKind};
use crate::poly::{GroundValuation, Poly, PolyEnv};
use crate::rational::{fmt_rat, parse_rat, Rat};
use crate::value_group::{GroupElem, DEFAULT_RANK};

/// A rational written as a string or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatSpec {
    Str(String),
    Int(i64),
}

impl RatSpec {
    pub fn parse(&self) -> Result<Rat> {
        match self {
            RatSpec::Str(s) => parse_rat(s),
            RatSpec::Int(n) => Ok(Rat::from_integer((*n).into())),
        }
    }

    pub fn of(q: &Rat) -> Self {
        RatSpec::Str(fmt_rat(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    Coeffs(Vec<RatSpec>),
    Expr(String),
}

impl PolySpec {
    pub fn parse(&self, env: &PolyEnv) -> Result<Poly> {
        match self {
            PolySpec::Coeffs(cs) => Ok(Poly::from_coeffs(cs.iter().map(RatSpec::parse).collect::<Result<_>>()?)),
            PolySpec::Expr(s) => Poly::parse(s, env),
        }
    }

    pub fn of(f: &Poly) -> Self {
        PolySpec::Coeffs(f.coeffs().iter().map(RatSpec::of).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeSpec {
    Root,
    #[serde(rename = "depth0")]
    DepthZero { a: RatSpec, gamma: String },
    Ordinary { parent: Box<NodeSpec>, phi: PolySpec, gamma: String },
    Limit { family: Box<FamilySpec>, phi: PolySpec, gamma: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqSpec {
    Explicit(Vec<RatSpec>),
    Linear { start: RatSpec, step: RatSpec },
    Geometric { limit: RatSpec, scale: RatSpec, ratio: RatSpec },
    HenselRoot { poly: PolySpec, seed: RatSpec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiSpec {
    Fixed(PolySpec),
    Shift(SeqSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub base: NodeSpec,
    pub chi: ChiSpec,
    pub beta: SeqSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyGenSpec {
    Explicit { members: Vec<NodeSpec> },
    PseudoConvergent { sequence: SeqSpec },
    AugmentationRule { rule: Box<RuleSpec> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub gen: FamilyGenSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_sup: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSpec {
    pub kind: String,
    pub phi: PolySpec,
    pub gamma: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub prime: u64,
    #[serde(default = "default_rank")]
    pub rank: usize,
    pub initial: NodeSpec,
    pub steps: Vec<StepSpec>,
}

fn default_rank() -> usize {
    DEFAULT_RANK
}

/// Context for turning specs into objects.
#[derive(Clone, Debug)]
pub struct Builder {
    pub ground: GroundValuation,
    pub env: PolyEnv,
    /// Used when a family spec omits its horizon.
    pub horizon: usize,
}

impl Builder {
    pub fn new(ground: &GroundValuation) -> Self {
        Builder { ground: ground.clone(), env: ground.env(), horizon: DEFAULT_HORIZON }
    }

    pub fn with_env(mut self, env: PolyEnv) -> Self {
        self.env = env;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    fn elem(&self, s: &str) -> Result<GroupElem> {
        GroupElem::parse(s, self.ground.rank())
    }

    pub fn node(&self, spec: &NodeSpec) -> Result<Node> {
        match spec {
            NodeSpec::Root => Ok(Node::root(&self.ground)),
            NodeSpec::DepthZero { a, gamma } => Node::depth_zero(&self.ground, a.parse()?, self.elem(gamma)?),
            NodeSpec::Ordinary { parent, phi, gamma } => {
                self.node(parent)?.augment(&phi.parse(&self.env)?, self.elem(gamma)?)
            }
            NodeSpec::Limit { family, phi, gamma } => {
                self.family(family)?.limit_augment(&phi.parse(&self.env)?, self.elem(gamma)?)
            }
        }
    }

    pub fn seq(&self, spec: &SeqSpec) -> Result<RatSeq> {
        Ok(match spec {
            SeqSpec::Explicit(v) => RatSeq::Explicit(v.iter().map(RatSpec::parse).collect::<Result<_>>()?),
            SeqSpec::Linear { start, step } => RatSeq::Linear { start: start.parse()?, step: step.parse()? },
            SeqSpec::Geometric { limit, scale, ratio } => RatSeq::Geometric {
                limit: limit.parse()?,
                scale: scale.parse()?,
                ratio: ratio.parse()?,
            },
            SeqSpec::HenselRoot { poly, seed } => RatSeq::HenselRoot { poly: poly.parse(&self.env)?, seed: seed.parse()? },
        })
    }

    pub fn family(&self, spec: &FamilySpec) -> Result<Family> {
        let gen = match &spec.gen {
            FamilyGenSpec::Explicit { members } => {
                FamilyGen::Explicit(members.iter().map(|m| self.node(m)).collect::<Result<_>>()?)
            }
            FamilyGenSpec::PseudoConvergent { sequence } => FamilyGen::PseudoConvergent(self.seq(sequence)?),
            FamilyGenSpec::AugmentationRule { rule } => FamilyGen::AugmentationRule {
                base: self.node(&rule.base)?,
                chi: match &rule.chi {
                    ChiSpec::Fixed(p) => Chi::Fixed(p.parse(&self.env)?),
                    ChiSpec::Shift(s) => Chi::Shift(self.seq(s)?),
                },
                beta: self.seq(&rule.beta)?,
            },
        };
        let sup = spec.declared_sup.as_deref().map(|s| self.elem(s)).transpose()?;
        Family::new(&self.ground, gen, spec.horizon.unwrap_or(self.horizon), sup)
    }

    pub fn chain_steps(&self, initial: &NodeSpec, steps: &[StepSpec]) -> Result<Chain> {
        let initial = self.node(initial)?;
        let steps = steps
            .iter()
            .map(|s| {
                let phi = s.phi.parse(&self.env)?;
                let gamma = self.elem(&s.gamma)?;
                match s.kind.as_str() {
                    "ordinary" => Ok(Step::ordinary(phi, gamma)),
                    "limit" => {
                        let fam = s
                            .family
                            .as_ref()
                            .ok_or_else(|| Error::Parse("limit step needs a \"family\"".into()))?;
                        Ok(Step::limit(self.family(fam)?, phi, gamma))
                    }
                    other => Err(Error::Parse(format!("unknown step kind {other:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Chain::new(initial, steps))
    }
}

impl ChainSpec {
    pub fn ground(&self) -> Result<GroundValuation> {
        GroundValuation::new(self.prime, self.rank)
    }

    pub fn build(&self) -> Result<Chain> {
        let g = self.ground()?;
        Builder::new(&g).chain_steps(&self.initial, &self.steps)
    }

    pub fn build_with(&self, b: &Builder) -> Result<Chain> {
        if b.ground.prime() != self.prime || b.ground.rank() != self.rank {
            return Err(Error::Config(format!(
                "chain document uses p = {}, rank {}; context has p = {}, rank {}",
                self.prime,
                self.rank,
                b.ground.prime(),
                b.ground.rank()
            )));
        }
        b.chain_steps(&self.initial, &self.steps)
    }

    pub fn of(c: &Chain) -> ChainSpec {
        ChainSpec {
            prime: c.ground.prime(),
            rank: c.ground.rank(),
            initial: NodeSpec::of(&c.initial),
            steps: c
                .steps
                .iter()
                .map(|s| StepSpec {
                    kind: match s.kind {
                        StepKind::Ordinary => "ordinary".into(),
                        StepKind::Limit => "limit".into(),
                    },
                    phi: PolySpec::of(&s.phi),
                    gamma: s.gamma.to_string(),
                    family: s.family.as_ref().map(FamilySpec::of),
                })
                .collect(),
        }
    }
}

impl NodeSpec {
    pub fn of(n: &Node) -> NodeSpec {
        match n.kind() {
            NodeKind::Root => NodeSpec::Root,
            NodeKind::DepthZero { a, delta } => NodeSpec::DepthZero { a: RatSpec::of(a), gamma: delta.to_string() },
            NodeKind::Ordinary { parent, phi, gamma } => NodeSpec::Ordinary {
                parent: Box::new(NodeSpec::of(parent)),
                phi: PolySpec::of(phi),
                gamma: gamma.to_string(),
            },
            NodeKind::Limit { family, phi, gamma } => NodeSpec::Limit {
                family: Box::new(FamilySpec::of(family)),
                phi: PolySpec::of(phi),
                gamma: gamma.to_string(),
            },
        }
    }
}

impl SeqSpec {
    pub fn of(s: &RatSeq) -> SeqSpec {
        match s {
            RatSeq::Explicit(v) => SeqSpec::Explicit(v.iter().map(RatSpec::of).collect()),
            RatSeq::Linear { start, step } => SeqSpec::Linear { start: RatSpec::of(start), step: RatSpec::of(step) },
            RatSeq::Geometric { limit, scale, ratio } => SeqSpec::Geometric {
                limit: RatSpec::of(limit),
                scale: RatSpec::of(scale),
                ratio: RatSpec::of(ratio),
            },
            RatSeq::HenselRoot { poly, seed } => SeqSpec::HenselRoot { poly: PolySpec::of(poly), seed: RatSpec::of(seed) },
        }
    }
}

impl FamilySpec {
    pub fn of(f: &Family) -> FamilySpec {
        let gen = match f.generator() {
            FamilyGen::Explicit(ms) => FamilyGenSpec::Explicit { members: ms.iter().map(NodeSpec::of).collect() },
            FamilyGen::PseudoConvergent(s) => FamilyGenSpec::PseudoConvergent { sequence: SeqSpec::of(s) },
            FamilyGen::AugmentationRule { base, chi, beta } => FamilyGenSpec::AugmentationRule {
                rule: Box::new(RuleSpec {
                    base: NodeSpec::of(base),
                    chi: match chi {
                        Chi::Fixed(p) => ChiSpec::Fixed(PolySpec::of(p)),
                        Chi::Shift(s) => ChiSpec::Shift(SeqSpec::of(s)),
                    },
                    beta: SeqSpec::of(beta),
                }),
            },
        };
        FamilySpec {
            gen,
            horizon: Some(f.horizon()),
            declared_sup: f.declared_sup().map(|s| s.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_hand_written_chain() {
        let doc = r#"{
            "prime": 7,
            "rank": 3,
            "initial": {"kind": "depth0", "a": "0", "gamma": "3/5"},
            "steps": [
                {"kind": "ordinary", "phi": "x^5 + p^3", "gamma": "10/3"},
                {"kind": "ordinary", "phi": ["343", 0, 0, 0, 0, 1], "gamma": "(0|4|-1)"}
            ]
        }"#;
        let spec: ChainSpec = serde_json::from_str(doc).unwrap();
        let c = spec.build();
        assert!(c.is_ok());
        assert_eq!(spec.steps[1].phi, PolySpec::Coeffs(vec![
            RatSpec::Str("343".into()),
            RatSpec::Int(0),
            RatSpec::Int(0),
            RatSpec::Int(0),
            RatSpec::Int(0),
            RatSpec::Int(1),
        ]));
    }

    #[test]
    fn family_spec_round_trip() {
        let doc = r#"{"kind": "augmentation_rule", "rule": {"base": {"kind": "root"},
            "chi": {"shift": {"hensel_root": {"poly": "x^2 - 2", "seed": "3"}}},
            "beta": {"linear": {"start": "1", "step": "1"}}}, "horizon": 10}"#;
        let spec: FamilySpec = serde_json::from_str(doc).unwrap();
        let g = GroundValuation::new(7, 3).unwrap();
        let fam = Builder::new(&g).family(&spec).unwrap();
        let again = FamilySpec::of(&fam);
        let text = serde_json::to_string(&again).unwrap();
        let back: FamilySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(Builder::new(&g).family(&back).unwrap(), fam);
    }
}
