use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use valtree::chain::{classify_primitive, Verdict};
use valtree::examples::{vaquie_chain, vaquie_polys};
use valtree::family::{FamilyClass, UnstableSearch, DEFAULT_HORIZON};
use valtree::json::{Builder, ChainSpec, FamilySpec, NodeSpec, PolySpec};
use valtree::newton::{newton_polygon, value_from_polygon};
use valtree::rational::{fmt_rat, rat};
use valtree::tree::{equiv_nodes, gcln, leq, tangent_direction, tree_distance};
use valtree::value_group::{sme_canonical, sme_equiv, QuasiCut};
use valtree::{Family, GroundValuation, GroupElem, Index, Node, Poly, Stability, TriState};

/// Exact inductive and limit valuations on Q[x] over the p-adic valuation.
#[derive(Parser)]
#[command(name = "valtree", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Residue prime of the ground valuation.
    #[arg(long, global = true, env = "VALTREE_PRIME", default_value_t = 7)]
    prime: u64,
    /// Rank of the value group (at least 3).
    #[arg(long, global = true, env = "VALTREE_RANK", default_value_t = 3)]
    rank: usize,
    /// Members generated for families that do not set their own horizon.
    #[arg(long, global = true, env = "VALTREE_HORIZON", default_value_t = DEFAULT_HORIZON)]
    horizon: usize,
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true, env = "VALTREE_JSON")]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Value of one or more polynomials at a node.
    Eval { node: PathBuf, #[arg(required = true)] polys: Vec<String> },
    /// Check the MLV conditions of a chain document.
    Validate { chain: PathBuf },
    /// Depth, degree, singular value and ramification of a node.
    Depth { node: PathBuf },
    /// Greatest common lower node of two nodes.
    Gcln { a: PathBuf, b: PathBuf },
    /// Whether the first node lies below the second (exit 1 if not).
    Leq { a: PathBuf, b: PathBuf },
    /// Tree distance sv(a) + sv(b) - 2 sv(a ^ b).
    Dist { a: PathBuf, b: PathBuf },
    /// Tangent direction from the first node toward the second.
    Tangent { a: PathBuf, b: PathBuf },
    /// Equivalence of two inner nodes (exit 1 if not, 3 if undecided).
    Equiv { a: PathBuf, b: PathBuf },
    /// Quasi-cut classification of group elements.
    Sme {
        #[command(subcommand)]
        cmd: SmeCmd,
    },
    /// phi-Newton polygon of a polynomial relative to a node.
    Newton { node: PathBuf, phi: String, f: String },
    /// Queries on a continuous family.
    Family {
        family: PathBuf,
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Built-in examples.
    Example {
        #[command(subcommand)]
        cmd: ExampleCmd,
    },
}

#[derive(Subcommand)]
enum SmeCmd {
    /// Realised quasi-cut and canonical representative.
    Classify { elem: String },
    /// Whether two elements realise the same quasi-cut (exit 1 if not).
    Equiv { x: String, y: String },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Stable value of a polynomial (exit 3 if still unstable).
    StableValue { poly: String },
    /// Search for a limit key polynomial (exit 3 if none is found).
    Unstable {
        #[arg(long, default_value_t = 4)]
        deg_bound: usize,
        #[arg(long = "candidate")]
        candidates: Vec<String>,
    },
    /// Supremum of the member values at a polynomial.
    Gamma { poly: String },
}

#[derive(Subcommand)]
enum ExampleCmd {
    /// The depth-three chain with phi_1 = x^5 + p^3, phi_2 = phi_1^3 + p^10,
    /// phi_3 = phi_2^2 + p^11 x^4 phi_1^2.
    Vaquie {
        /// Print the chain document instead of the table.
        #[arg(long)]
        emit_chain: bool,
    },
}

enum Outcome {
    Ok,
    Violated,
    Unknown,
}

struct Ctx {
    json: bool,
    ground: GroundValuation,
    builder: Builder,
}

impl Ctx {
    fn new(g: &Global) -> valtree::Result<Ctx> {
        let ground = GroundValuation::new(g.prime, g.rank)?;
        let mut env = ground.env();
        for (i, f) in vaquie_polys(&ground).into_iter().enumerate() {
            env.insert(&format!("phi{i}"), f);
        }
        let builder = Builder::new(&ground).with_env(env).with_horizon(g.horizon);
        Ok(Ctx { json: g.json, ground, builder })
    }

    fn poly(&self, s: &str) -> valtree::Result<Poly> {
        Poly::parse(s, &self.builder.env)
    }

    fn elem(&self, s: &str) -> valtree::Result<GroupElem> {
        self.ground.elem(s)
    }

    fn node(&self, path: &Path) -> anyhow::Result<Node> {
        let doc = read_json(path)?;
        if doc.get("steps").is_some() {
            let spec: ChainSpec = serde_json::from_value(doc).with_context(|| format!("{}", path.display()))?;
            return Ok(spec.build_with(&self.builder)?.last()?);
        }
        let spec: NodeSpec = serde_json::from_value(doc).with_context(|| format!("{}", path.display()))?;
        Ok(self.builder.node(&spec)?)
    }

    fn family(&self, path: &Path) -> anyhow::Result<Family> {
        let spec: FamilySpec =
            serde_json::from_value(read_json(path)?).with_context(|| format!("{}", path.display()))?;
        Ok(self.builder.family(&spec)?)
    }

    fn emit(&self, value: Value, table: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("serialisable"));
        } else {
            print!("{}", table());
        }
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn poly_json(f: &Poly) -> Value {
    serde_json::to_value(PolySpec::of(f)).expect("serialisable")
}

fn node_json(n: &Node) -> Value {
    serde_json::to_value(NodeSpec::of(n)).expect("serialisable")
}

/// A rational value prints as a bare rational in tables.
fn short(x: &GroupElem) -> String {
    x.as_rational().map(fmt_rat).unwrap_or_else(|| x.to_string())
}

fn tri_outcome(t: TriState) -> Outcome {
    match t {
        TriState::Yes => Outcome::Ok,
        TriState::No => Outcome::Violated,
        TriState::Unknown => Outcome::Unknown,
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let ctx = Ctx::new(&cli.global)?;
    match cli.cmd {
        Cmd::Eval { node, polys } => {
            let mu = ctx.node(&node)?;
            let mut rows = Vec::new();
            for s in &polys {
                let f = ctx.poly(s)?;
                rows.push((s.clone(), f.clone(), mu.eval(&f)?));
            }
            let value = json!(rows
                .iter()
                .map(|(s, f, v)| json!({"input": s, "poly": poly_json(f), "value": v.to_string()}))
                .collect::<Vec<_>>());
            ctx.emit(value, || {
                if let [(_, _, v)] = rows.as_slice() {
                    format!("{v}\n")
                } else {
                    rows.iter().map(|(s, _, v)| format!("{s}\t{v}\n")).collect()
                }
            });
            Ok(Outcome::Ok)
        }
        Cmd::Validate { chain } => {
            let spec: ChainSpec = serde_json::from_value(read_json(&chain)?)?;
            let c = spec.build_with(&ctx.builder)?;
            let rep = c.validate_mlv();
            let verdict = match rep.verdict {
                Verdict::Ok => "ok",
                Verdict::Violated => "violated",
                Verdict::Unverified => "unknown",
            };
            let e = if rep.ok() { c.ramification_product().ok() } else { None };
            let value = json!({
                "verdict": verdict,
                "depth": c.depth(),
                "lim_depth": c.lim_depth(),
                "ramification_product": e,
                "violations": rep.violations.iter().map(|v| json!({
                    "step": v.step, "code": v.code.as_str(), "message": v.message,
                })).collect::<Vec<_>>(),
                "certificates": rep.certificates.iter().map(|c| json!({
                    "step": c.step,
                    "kind": c.kind.to_string(),
                    "base_degree": c.base_degree,
                    "degree": c.degree,
                    "base_value": c.base_value.to_string(),
                    "gamma": c.gamma.to_string(),
                    "note": c.note,
                })).collect::<Vec<_>>(),
                "unverified_steps": rep.unverified,
            });
            ctx.emit(value, || {
                let mut out = format!("{verdict}, depth {}, lim_depth {}\n", c.depth(), c.lim_depth());
                for s in &rep.certificates {
                    out.push_str(&format!(
                        "  step {} {}: degree {} -> {}, {} < {}\n",
                        s.step, s.kind, s.base_degree, s.degree, s.base_value, s.gamma
                    ));
                }
                for v in &rep.violations {
                    out.push_str(&format!("  step {} {}: {}\n", v.step, v.code, v.message));
                }
                if let Some(e) = e {
                    out.push_str(&format!("  ramification product {e}\n"));
                }
                out
            });
            Ok(match rep.verdict {
                Verdict::Ok => Outcome::Ok,
                Verdict::Violated => Outcome::Violated,
                Verdict::Unverified => Outcome::Unknown,
            })
        }
        Cmd::Depth { node } => {
            let mu = ctx.node(&node)?;
            let e = mu.e_rel().ok().map(|i| i.to_string());
            let kind = classify_primitive(&mu).ok().map(|c| c.kind.to_string());
            let value = json!({
                "node": mu.to_string(),
                "depth": mu.depth(),
                "lim_depth": mu.lim_depth(),
                "degree": mu.degree(),
                "sv": mu.sv().to_string(),
                "e_rel": e,
                "leaf": mu.is_leaf(),
                "primitive": kind,
            });
            ctx.emit(value, || {
                format!(
                    "{mu}\n  depth {}, lim_depth {}, degree {}, sv {}, e_rel {}{}\n",
                    mu.depth(),
                    mu.lim_depth(),
                    mu.degree(),
                    mu.sv(),
                    e.as_deref().unwrap_or("-"),
                    if mu.is_leaf() { ", leaf" } else { "" }
                )
            });
            Ok(Outcome::Ok)
        }
        Cmd::Gcln { a, b } => {
            let m = gcln(&ctx.node(&a)?, &ctx.node(&b)?)?;
            ctx.emit(node_json(&m), || format!("{m}\n"));
            Ok(Outcome::Ok)
        }
        Cmd::Leq { a, b } => {
            let r = leq(&ctx.node(&a)?, &ctx.node(&b)?)?;
            ctx.emit(json!({"leq": r}), || format!("{r}\n"));
            Ok(if r { Outcome::Ok } else { Outcome::Violated })
        }
        Cmd::Dist { a, b } => {
            let d = tree_distance(&ctx.node(&a)?, &ctx.node(&b)?)?;
            ctx.emit(json!({"distance": d.to_string()}), || format!("{d}\n"));
            Ok(Outcome::Ok)
        }
        Cmd::Tangent { a, b } => {
            let t = tangent_direction(&ctx.node(&a)?, &ctx.node(&b)?)?;
            ctx.emit(json!({"tangent": poly_json(&t)}), || format!("{t}\n"));
            Ok(Outcome::Ok)
        }
        Cmd::Equiv { a, b } => {
            let rep = equiv_nodes(&ctx.node(&a)?, &ctx.node(&b)?)?;
            let value = json!({
                "result": rep.result.to_string(),
                "common_key": rep.common_key.to_string(),
                "same_base": rep.same_base.to_string(),
                "sme": rep.sme.to_string(),
            });
            ctx.emit(value, || {
                format!(
                    "{} (common key {}, same base {}, sme {})\n",
                    rep.result, rep.common_key, rep.same_base, rep.sme
                )
            });
            Ok(tri_outcome(rep.result))
        }
        Cmd::Sme { cmd } => match cmd {
            SmeCmd::Classify { elem } => {
                let x = ctx.elem(&elem)?;
                let cut = QuasiCut::of(&x)?;
                let canon = sme_canonical(&x)?;
                ctx.emit(json!({"elem": x.to_string(), "quasi_cut": cut.to_string(), "canonical": canon.to_string()}), || {
                    format!("{cut}, canonical {canon}\n")
                });
                Ok(Outcome::Ok)
            }
            SmeCmd::Equiv { x, y } => {
                let r = sme_equiv(&ctx.elem(&x)?, &ctx.elem(&y)?)?;
                ctx.emit(json!({"sme_equiv": r}), || format!("{r}\n"));
                Ok(if r { Outcome::Ok } else { Outcome::Violated })
            }
        },
        Cmd::Newton { node, phi, f } => {
            let mu = ctx.node(&node)?;
            let (phi, f) = (ctx.poly(&phi)?, ctx.poly(&f)?);
            let npg = newton_polygon(&mu, &phi, &f)?;
            let next = mu.eval(&phi)?;
            let value = json!({
                "points": npg.points.iter().map(|p| json!({"s": p.s, "value": p.value.to_string()})).collect::<Vec<_>>(),
                "hull": npg.hull.iter().map(|&i| npg.points[i].s).collect::<Vec<_>>(),
                "slopes": npg.slopes.iter().map(|s| json!({"slope": fmt_rat(&s.slope), "length": s.length})).collect::<Vec<_>>(),
                "mixed": npg.mixed,
                "value_at_mu_phi": value_from_polygon(&npg, &next).to_string(),
            });
            ctx.emit(value, || {
                let mut out = npg.sketch();
                for s in &npg.slopes {
                    out.push_str(&format!("slope {} over length {}\n", fmt_rat(&s.slope), s.length));
                }
                out
            });
            Ok(Outcome::Ok)
        }
        Cmd::Family { family, cmd } => {
            let fam = ctx.family(&family)?;
            match cmd {
                FamilyCmd::StableValue { poly } => match fam.stable_value(&ctx.poly(&poly)?)? {
                    Stability::Stable { value, certified_at, members_used } => {
                        let v = json!({
                            "stable": true,
                            "value": value.to_string(),
                            "certified_at": certified_at,
                            "members_used": members_used,
                        });
                        ctx.emit(v, || format!("{value} (stable from member {certified_at})\n"));
                        Ok(Outcome::Ok)
                    }
                    Stability::Unstable { tried } => {
                        ctx.emit(json!({"stable": false, "tried": tried}), || {
                            format!("unstable through {tried} members\n")
                        });
                        Ok(Outcome::Unknown)
                    }
                },
                FamilyCmd::Unstable { deg_bound, candidates } => {
                    let cands = candidates.iter().map(|s| ctx.poly(s)).collect::<valtree::Result<Vec<_>>>()?;
                    match fam.find_unstable(deg_bound, &cands)? {
                        UnstableSearch::Found { m_inf, phi, class, minimal_certified } => {
                            let class = match class {
                                FamilyClass::Essential => "essential",
                                FamilyClass::Inessential => "inessential",
                            };
                            let v = json!({
                                "found": true,
                                "m_inf": m_inf,
                                "phi": poly_json(&phi),
                                "class": class,
                                "minimal_certified": minimal_certified,
                            });
                            ctx.emit(v, || format!("{phi} (degree {m_inf}, {class})\n"));
                            Ok(Outcome::Ok)
                        }
                        UnstableSearch::NoneUpTo { deg_bound, horizon } => {
                            ctx.emit(json!({"found": false, "deg_bound": deg_bound, "horizon": horizon}), || {
                                format!("no unstable candidate up to degree {deg_bound} within {horizon} members\n")
                            });
                            Ok(Outcome::Unknown)
                        }
                    }
                }
                FamilyCmd::Gamma { poly } => {
                    let g = fam.gamma_a(&ctx.poly(&poly)?)?;
                    ctx.emit(json!({"gamma": g.to_string()}), || format!("{g}\n"));
                    Ok(Outcome::Ok)
                }
            }
        }
        Cmd::Example { cmd: ExampleCmd::Vaquie { emit_chain } } => {
            let c = vaquie_chain(&ctx.ground)?;
            if emit_chain {
                println!("{}", serde_json::to_string_pretty(&ChainSpec::of(&c))?);
                return Ok(Outcome::Ok);
            }
            let nodes = c.nodes()?;
            let polys = vaquie_polys(&ctx.ground);
            let top = nodes.last().expect("nonempty");
            let values: Vec<GroupElem> = polys[..3].iter().map(|f| top.eval(f)).collect::<valtree::Result<_>>()?;
            let e = c.ramification_product()?;
            let nu: Vec<GroupElem> = values.iter().map(|v| v.scalar_mul(&rat(e as i64))).collect::<valtree::Result<_>>()?;
            let e_rel: Vec<Option<Index>> = nodes.iter().map(|n| n.e_rel().ok()).collect();
            let value = json!({
                "nodes": nodes.iter().zip(&e_rel).map(|(n, e)| json!({
                    "node": n.to_string(),
                    "degree": n.degree(),
                    "sv": n.sv().to_string(),
                    "e_rel": e.as_ref().map(|i| i.to_string()),
                })).collect::<Vec<_>>(),
                "values": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "nu": nu.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "ramification_product": e,
            });
            ctx.emit(value, || {
                let mut out = format!("{:<6}{:>8}{:>10}{:>8}\n", "node", "degree", "sv", "e_rel");
                for (i, (n, e)) in nodes.iter().zip(&e_rel).enumerate() {
                    let e = e.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "-".into());
                    out.push_str(&format!("{:<6}{:>8}{:>10}{:>8}\n", format!("mu{i}"), n.degree(), short(n.sv()), e));
                }
                out.push('\n');
                out.push_str(&format!("{:<12}{:>8}{:>8}{:>8}\n", "", "phi0", "phi1", "phi2"));
                let row = |name: &str, vs: &[GroupElem]| {
                    format!("{:<12}{:>8}{:>8}{:>8}\n", name, short(&vs[0]), short(&vs[1]), short(&vs[2]))
                };
                out.push_str(&row("mu3", &values));
                out.push_str(&row(&format!("nu = {e} mu3"), &nu));
                out
            });
            Ok(Outcome::Ok)
        }
    }
}

fn exit_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<valtree::Error>() {
        Some(valtree::Error::StabilityHorizon { .. } | valtree::Error::SupUnderdetermined(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Ok(Outcome::Unknown) => ExitCode::from(3),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_for(&err))
        }
    }
}
