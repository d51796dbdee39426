use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use valtree::json::{Builder, ChainSpec, NodeSpec};
use valtree::tree::node_eq;
use valtree::GroundValuation;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valtree"))
        .args(args)
        .env_remove("VALTREE_PRIME")
        .env_remove("VALTREE_RANK")
        .env_remove("VALTREE_HORIZON")
        .env_remove("VALTREE_JSON")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", &data("mu3.json"), "phi2", "--prime", "7"]), "(0|301/30|0)\n");
    assert_eq!(stdout(&["eval", &data("root.json"), "x"]), "(-1|0|0)\n");
    assert_eq!(stdout(&["eval", &data("mu0.json"), "x^5+343"]), "(0|3|0)\n");
    assert_eq!(stdout(&["eval", &data("vaquie_chain.json"), "phi0", "phi1"]), "phi0\t(0|3/5|0)\nphi1\t(0|10/3|0)\n");
}

#[test]
fn worked_example_table() {
    let t7 = stdout(&["example", "vaquie", "--prime", "7"]);
    let nu = t7.lines().find(|l| l.starts_with("nu = 30 mu3")).unwrap();
    assert_eq!(nu.split_whitespace().skip(4).collect::<Vec<_>>(), ["18", "100", "301"]);
    assert_eq!(stdout(&["example", "vaquie", "--prime", "11"]), t7);
    let bad = run(&["example", "vaquie", "--prime", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("prime 3 divides example constants"));
}

#[test]
fn wrappers() {
    assert_eq!(stdout(&["gcln", &data("omega_0_3.json"), &data("omega_7_2.json")]), "w(0, (0|1|0))\n");
    assert_eq!(stdout(&["sme", "classify", "(0|1|-4)"]), "ball_minus(1), canonical (0|1|-1)\n");
    assert!(stdout(&["validate", &data("vaquie_chain.json")]).starts_with("ok, depth 3, lim_depth 0\n"));
    assert_eq!(stdout(&["tangent", &data("mu0.json"), &data("mu2.json")]), "x^5 + 343\n");
    assert_eq!(stdout(&["dist", &data("mu0.json"), &data("mu1.json")]), "(0|41/15|0)\n");
    assert_eq!(stdout(&["family", &data("inessential_family.json"), "gamma", "x"]), "(0|1|-1)\n");
    assert_eq!(stdout(&["family", &data("sqrt2_family.json"), "unstable"]), "x^2 - 2 (degree 2, essential)\n");
    assert_eq!(stdout(&["eval", &data("mu_a.json"), "x^2 - 2"]), "(1|0|0)\n");
    assert!(stdout(&["newton", &data("mu0.json"), "phi1", "phi2"]).contains("slope -10/3 over length 3"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["leq", &data("mu2.json"), &data("mu1.json")]), 1);
    assert_eq!(code(&["leq", &data("mu1.json"), &data("mu2.json")]), 0);
    assert_eq!(code(&["sme", "equiv", "(0|1|-4)", "1-"]), 0);
    assert_eq!(code(&["sme", "equiv", "1+", "1-"]), 1);
    assert_eq!(code(&["equiv", &data("mu1.json"), &data("mu2.json")]), 1);
    assert_eq!(code(&["family", &data("sqrt2_family.json"), "stable-value", "x^2 - 2"]), 3);
    assert_eq!(code(&["family", &data("sqrt2_family.json"), "stable-value", "x - 3"]), 0);
    assert_eq!(code(&["eval", &data("mu0.json"), "x^"]), 2);
    assert_eq!(code(&["eval", &data("missing.json"), "x"]), 2);
    assert_eq!(code(&["eval", &data("mu0.json"), "x", "--prime", "8"]), 2);
    assert_eq!(code(&["eval", &data("mu0.json"), "x", "--rank", "2"]), 2);
    assert_eq!(code(&["validate", &data("vaquie_chain.json"), "--prime", "11"]), 2);
}

#[test]
fn environment_overrides() {
    let out = Command::new(env!("CARGO_BIN_EXE_valtree"))
        .args(["eval", &data("mu0.json"), "x^5 + p^3"])
        .env("VALTREE_PRIME", "11")
        .env("VALTREE_JSON", "true")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["value"], "(0|3|0)");
    assert_eq!(v[0]["poly"][0], "1331");
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["example", "vaquie", "--json"],
        vec!["validate", &data("vaquie_chain.json"), "--json"],
        vec!["newton", &data("mu1.json"), "phi2", "phi3", "--json"],
        vec!["depth", &data("mu_a.json"), "--json"],
    ]
    .iter()
    .map(|a| a.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, run(&args).stdout);
    }
}

#[test]
fn emitted_json_round_trips() {
    let g = GroundValuation::new(7, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let chain_text = stdout(&["example", "vaquie", "--emit-chain"]);
    let spec: ChainSpec = serde_json::from_str(&chain_text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&spec).unwrap() + "\n", chain_text);
    let path = dir.path().join("chain.json");
    std::fs::write(&path, &chain_text).unwrap();
    let path = path.to_str().unwrap();
    assert!(stdout(&["validate", path]).starts_with("ok"));
    assert_eq!(stdout(&["eval", path, "phi2"]), "(0|301/30|0)\n");

    let meet = stdout(&["gcln", &data("mu2.json"), &data("omega_7_2.json"), "--json"]);
    let spec: NodeSpec = serde_json::from_str(&meet).unwrap();
    let node = Builder::new(&g).node(&spec).unwrap();
    let path = dir.path().join("meet.json");
    std::fs::write(&path, &meet).unwrap();
    let again = stdout(&["gcln", path.to_str().unwrap(), path.to_str().unwrap(), "--json"]);
    assert_eq!(again, meet);
    let back = Builder::new(&g).node(&serde_json::from_str(&again).unwrap()).unwrap();
    assert!(node_eq(&node, &back).unwrap());
}
