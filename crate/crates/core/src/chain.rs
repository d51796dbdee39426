//! MLV chains: validation, depth, primitive classification and path bundles.

use std::fmt;

use crate::error::{Error, Result};
use crate::family::{Family, Stability};
use crate::node::{Node, NodeKind};
use crate::poly::{GroundValuation, Poly};
use crate::tree::{leq, node_eq, tangent_direction};
use crate::value_group::{GroupElem, Index};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Ordinary,
    Limit,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Ordinary => "ordinary",
            StepKind::Limit => "limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub kind: StepKind,
    pub phi: Poly,
    pub gamma: GroupElem,
    pub family: Option<Family>,
}

impl Step {
    pub fn ordinary(phi: Poly, gamma: GroupElem) -> Step {
        Step { kind: StepKind::Ordinary, phi, gamma, family: None }
    }

    pub fn limit(family: Family, phi: Poly, gamma: GroupElem) -> Step {
        Step { kind: StepKind::Limit, phi, gamma, family: Some(family) }
    }
}

/// `mu_0 -> mu_1 -> ... -> mu_r`, each arrow an ordinary or limit augmentation.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub ground: GroundValuation,
    pub initial: Node,
    pub steps: Vec<Step>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationCode {
    InitialNotDegreeOne,
    NotMonic,
    LeafNotFinal,
    GammaNotExceeding,
    DegreeNotIncreasing,
    NotKeyPolynomial,
    FamilyMissing,
    FamilyInvalid,
    FamilyDegreeMismatch,
    FamilyBelowBase,
    NotUnstable,
    PreviousKeyInTangent,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationCode::InitialNotDegreeOne => "initial_not_degree_one",
            ViolationCode::NotMonic => "not_monic",
            ViolationCode::LeafNotFinal => "leaf_not_final",
            ViolationCode::GammaNotExceeding => "gamma_not_exceeding",
            ViolationCode::DegreeNotIncreasing => "degree_not_increasing",
            ViolationCode::NotKeyPolynomial => "not_key_polynomial",
            ViolationCode::FamilyMissing => "family_missing",
            ViolationCode::FamilyInvalid => "family_invalid",
            ViolationCode::FamilyDegreeMismatch => "family_degree_mismatch",
            ViolationCode::FamilyBelowBase => "family_below_base",
            ViolationCode::NotUnstable => "not_unstable",
            ViolationCode::PreviousKeyInTangent => "previous_key_in_tangent",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// 1-based step index; 0 for the initial node.
    pub step: usize,
    pub code: ViolationCode,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepCertificate {
    pub step: usize,
    pub kind: StepKind,
    pub base_degree: usize,
    pub degree: usize,
    pub base_value: GroupElem,
    pub gamma: GroupElem,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violated,
    Unverified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MlvReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    pub certificates: Vec<StepCertificate>,
    /// Steps whose family checks ran out of horizon.
    pub unverified: Vec<usize>,
}

impl MlvReport {
    pub fn ok(&self) -> bool {
        self.verdict == Verdict::Ok
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }
}

impl Chain {
    pub fn new(initial: Node, steps: Vec<Step>) -> Chain {
        Chain { ground: initial.ground().clone(), initial, steps }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn lim_depth(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == StepKind::Limit).count()
    }

    /// `mu_0, ..., mu_r`, built with the usual constructor checks.
    pub fn nodes(&self) -> Result<Vec<Node>> {
        let mut out = vec![self.initial.clone()];
        for s in &self.steps {
            let cur = out.last().expect("nonempty");
            let next = match s.kind {
                StepKind::Ordinary => cur.augment(&s.phi, s.gamma.clone())?,
                StepKind::Limit => s
                    .family
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("limit step without a family".into()))?
                    .limit_augment(&s.phi, s.gamma.clone())?,
            };
            out.push(next);
        }
        Ok(out)
    }

    pub fn last(&self) -> Result<Node> {
        Ok(self.nodes()?.pop().expect("nonempty"))
    }

    /// Checks the MLV conditions step by step. Stops at the first step that
    /// cannot be built.
    pub fn validate_mlv(&self) -> MlvReport {
        let mut violations = Vec::new();
        let mut certificates = Vec::new();
        let mut unverified = Vec::new();
        let mut violate = |step: usize, code: ViolationCode, message: String| {
            violations.push(Violation { step, code, message });
        };
        if self.initial.degree() != 1 || self.initial.is_leaf() && !self.steps.is_empty() {
            violate(0, ViolationCode::InitialNotDegreeOne, format!("initial node {} must be an inner degree-one node", self.initial));
        }
        let mut cur = self.initial.clone();
        for (i, s) in self.steps.iter().enumerate() {
            let n = i + 1;
            if cur.is_leaf() {
                violate(n, ViolationCode::LeafNotFinal, "only the final step may have gamma = inf".into());
                break;
            }
            if !s.phi.is_monic() {
                violate(n, ViolationCode::NotMonic, format!("{} is not monic", s.phi));
                break;
            }
            let base_value = match cur.eval(&s.phi) {
                Ok(v) => v,
                Err(e) => {
                    violate(n, ViolationCode::NotKeyPolynomial, e.to_string());
                    break;
                }
            };
            match s.kind {
                StepKind::Ordinary => {
                    let mut bad = false;
                    if s.gamma <= base_value {
                        violate(n, ViolationCode::GammaNotExceeding, format!(
                            "gamma must strictly exceed mu_{}({}) = {}; got {}", i, s.phi, base_value, s.gamma
                        ));
                        bad = true;
                    }
                    if s.phi.deg0() <= cur.degree() {
                        violate(n, ViolationCode::DegreeNotIncreasing, format!(
                            "ordinary step needs deg(mu_{i}) = {} < deg t = {}", cur.degree(), s.phi.deg0()
                        ));
                        bad = true;
                    }
                    if bad {
                        break;
                    }
                    match cur.augment(&s.phi, s.gamma.clone()) {
                        Ok(next) => {
                            certificates.push(StepCertificate {
                                step: n,
                                kind: s.kind,
                                base_degree: cur.degree(),
                                degree: next.degree(),
                                base_value,
                                gamma: s.gamma.clone(),
                                note: format!("{} < {}; value of key raised from its base value", cur.degree(), next.degree()),
                            });
                            cur = next;
                        }
                        Err(e) => {
                            violate(n, ViolationCode::NotKeyPolynomial, e.to_string());
                            break;
                        }
                    }
                }
                StepKind::Limit => {
                    let Some(fam) = &s.family else {
                        violate(n, ViolationCode::FamilyMissing, "limit step without a family".into());
                        break;
                    };
                    let members = match fam.members() {
                        Ok(m) => m,
                        Err(e) => {
                            violate(n, ViolationCode::FamilyInvalid, e.to_string());
                            break;
                        }
                    };
                    let first = &members[0];
                    if first.degree() != cur.degree() {
                        violate(n, ViolationCode::FamilyDegreeMismatch, format!(
                            "stable degree {} differs from deg(mu_{i}) = {}", first.degree(), cur.degree()
                        ));
                        break;
                    }
                    match (leq(&cur, first), leq(first, &cur)) {
                        (Ok(true), Ok(false)) => {}
                        _ => {
                            violate(n, ViolationCode::FamilyBelowBase, format!("family does not start strictly above mu_{i}"));
                            break;
                        }
                    }
                    if let Ok(t) = tangent_direction(&cur, first) {
                        let prev = cur.key_poly();
                        let same = t.degree() == prev.degree()
                            && cur.eval(&(&t - &prev)).map(|d| d > *cur.sv()).unwrap_or(false);
                        if same && !matches!(cur.kind(), NodeKind::Root) {
                            violate(n, ViolationCode::PreviousKeyInTangent, format!(
                                "{prev} lies in the tangent direction of the family"
                            ));
                            break;
                        }
                    }
                    match fam.stable_value(&s.phi) {
                        Ok(Stability::Unstable { .. }) => {}
                        Ok(Stability::Stable { value, .. }) => {
                            violate(n, ViolationCode::NotUnstable, format!("{} is stable with value {value}", s.phi));
                            break;
                        }
                        Err(Error::StabilityHorizon { .. }) => unverified.push(n),
                        Err(e) => {
                            violate(n, ViolationCode::FamilyInvalid, e.to_string());
                            break;
                        }
                    }
                    match fam.limit_augment(&s.phi, s.gamma.clone()) {
                        Ok(next) => {
                            certificates.push(StepCertificate {
                                step: n,
                                kind: s.kind,
                                base_degree: cur.degree(),
                                degree: next.degree(),
                                base_value,
                                gamma: s.gamma.clone(),
                                note: format!(
                                    "stable degree {} = deg(mu_{i}); {} unstable through {} members",
                                    first.degree(),
                                    s.phi,
                                    members.len()
                                ),
                            });
                            cur = next;
                        }
                        Err(e) => {
                            violate(n, ViolationCode::GammaNotExceeding, e.to_string());
                            break;
                        }
                    }
                }
            }
        }
        let verdict = if !violations.is_empty() {
            Verdict::Violated
        } else if !unverified.is_empty() {
            Verdict::Unverified
        } else {
            Verdict::Ok
        };
        MlvReport { verdict, violations, certificates, unverified }
    }

    /// Product of the relative ramification indices of the inner nodes; the
    /// final node is skipped when it is a leaf or incommensurable.
    pub fn ramification_product(&self) -> Result<u64> {
        let nodes = self.nodes()?;
        let last = nodes.len() - 1;
        let mut prod = 1u64;
        for (i, n) in nodes.iter().enumerate() {
            if n.is_leaf() {
                continue;
            }
            match n.e_rel()? {
                Index::Finite(e) => prod *= e,
                Index::Infinite if i == last => {}
                Index::Infinite => {
                    return Err(Error::Domain(format!("intermediate node mu_{i} is incommensurable")));
                }
            }
        }
        Ok(prod)
    }

    /// Classification of `mu_i`, with the next chain polynomial as witness
    /// when it is a strong key polynomial.
    pub fn classify(&self, i: usize) -> Result<Classification> {
        let nodes = self.nodes()?;
        let n = nodes.get(i).ok_or_else(|| Error::Precondition(format!("chain has no node {i}")))?;
        let mut c = classify_primitive(n)?;
        if c.kind == PrimitiveKind::PrimitiveOrdinary {
            if let Some(s) = self.steps.get(i) {
                if s.kind == StepKind::Ordinary && s.phi.deg0() > n.degree() {
                    c.witness = Some(s.phi.clone());
                }
            }
        }
        Ok(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimitiveKind {
    PrimitiveOrdinary,
    PrimitiveLimit,
    NonPrimitive,
}

impl fmt::Display for PrimitiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimitiveKind::PrimitiveOrdinary => "primitive_ordinary",
            PrimitiveKind::PrimitiveLimit => "primitive_limit",
            PrimitiveKind::NonPrimitive => "non_primitive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub kind: PrimitiveKind,
    /// A key polynomial of degree above the node degree, when known.
    pub witness: Option<Poly>,
}

fn is_limit_primitive(n: &Node) -> bool {
    match n.kind() {
        NodeKind::Root => true,
        NodeKind::DepthZero { delta, .. } => *delta == GroupElem::minus_infinity(n.rank()),
        NodeKind::Limit { family, phi, gamma } => family.gamma_a(phi).map(|g| g == *gamma).unwrap_or(false),
        NodeKind::Ordinary { .. } => false,
    }
}

/// Root and minimal limit augmentations are primitive-limit; other inner
/// nodes are primitive-ordinary exactly when commensurable.
pub fn classify_primitive(n: &Node) -> Result<Classification> {
    if n.is_leaf() {
        return Err(Error::Domain("classification applies to inner nodes".into()));
    }
    if is_limit_primitive(n) {
        return Ok(Classification { kind: PrimitiveKind::PrimitiveLimit, witness: None });
    }
    if n.sv().is_rational() && matches!(n.e_rel(), Ok(Index::Finite(_))) {
        return Ok(Classification { kind: PrimitiveKind::PrimitiveOrdinary, witness: n.strong_key_witness() });
    }
    Ok(Classification { kind: PrimitiveKind::NonPrimitive, witness: None })
}

/// Whether `nu` lies in the path bundle `P(rho)` of the primitive `rho`.
pub fn in_bundle(rho: &Node, kind: PrimitiveKind, nu: &Node) -> Result<bool> {
    match kind {
        PrimitiveKind::NonPrimitive => Ok(false),
        PrimitiveKind::PrimitiveLimit => match rho.kind() {
            NodeKind::Root | NodeKind::DepthZero { .. } => Ok(nu.degree() == 1),
            NodeKind::Limit { family, .. } => {
                if nu.degree() != rho.degree() || !leq(rho, nu)? {
                    return Ok(false);
                }
                let mut cur = nu.clone();
                loop {
                    let next = match cur.kind() {
                        NodeKind::Limit { family: f, .. } => return Ok(f == family),
                        NodeKind::Ordinary { parent, .. } if parent.degree() == nu.degree() => parent.clone(),
                        _ => return Ok(false),
                    };
                    cur = next;
                }
            }
            NodeKind::Ordinary { .. } => Ok(false),
        },
        PrimitiveKind::PrimitiveOrdinary => {
            if nu.degree() <= rho.degree() || !leq(rho, nu)? {
                return Ok(false);
            }
            let phi = nu.key_poly();
            if rho.eval(&phi)? >= *nu.sv() {
                return Ok(false);
            }
            let cand = Node::ordinary_unchecked(rho, phi, nu.sv().clone());
            node_eq(&cand, nu)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub node: Node,
    /// Primitive nodes whose bundle contains `node`.
    pub primitives: Vec<(Node, PrimitiveKind)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionReport {
    pub assignments: Vec<Assignment>,
    pub ok: bool,
}

/// Assigns each node to the primitive nodes among its construction
/// ancestors whose bundle contains it; valid samples give exactly one.
pub fn partition_check(nodes: &[Node]) -> Result<PartitionReport> {
    let mut assignments = Vec::with_capacity(nodes.len());
    for nu in nodes {
        let mut primitives: Vec<(Node, PrimitiveKind)> = Vec::new();
        for rho in nu.ancestors()? {
            if rho.is_leaf() {
                continue;
            }
            let kind = classify_primitive(&rho)?.kind;
            if in_bundle(&rho, kind, nu)? {
                let mut dup = false;
                for (q, _) in &primitives {
                    if node_eq(q, &rho)? {
                        dup = true;
                        break;
                    }
                }
                if !dup {
                    primitives.push((rho, kind));
                }
            }
        }
        assignments.push(Assignment { node: nu.clone(), primitives });
    }
    let ok = assignments.iter().all(|a| a.primitives.len() == 1);
    Ok(PartitionReport { assignments, ok })
}
