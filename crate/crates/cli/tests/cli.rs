use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bd-lab"))
        .args(args)
        .env_remove("BD_LAB_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn run_json(args: &[&str], stdin: Option<&str>) -> Value {
    let out = run(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn one() -> Value {
    json!({ "z:0": [{ "coeff": "1", "root": "0", "theta": "0" }] })
}

fn crossed(n: u64, terms: &[(i64, Value)]) -> Value {
    let coeffs: serde_json::Map<String, Value> = terms.iter().map(|(l, a)| (format!("u:{l}"), a.clone())).collect();
    json!({ "n": n, "algebra": "circle", "coeffs": coeffs })
}

/// `Σ u^l e_{i,j}` over the given `(i, j, l)` at stage `n`.
fn matrix(n: u64, units: &[(usize, usize, i64)]) -> Value {
    block_matrix(n, n, units)
}

/// `Σ u^l e_{i,j}` in `M_size(A ×_{α^power} Z)`.
fn block_matrix(size: u64, n: u64, units: &[(usize, usize, i64)]) -> Value {
    let rows: Vec<Value> = (0..size as usize)
        .map(|i| {
            Value::Array(
                (0..size as usize)
                    .map(|j| {
                        let terms: Vec<_> = units.iter().filter(|u| u.0 == i && u.1 == j).map(|u| (u.2, one())).collect();
                        crossed(n, &terms)
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "size": size, "entries": rows })
}

#[test]
fn gamma_on_u_e00() {
    let out = run_json(&["apply", "gamma", "--from", "1", "--to", "2"], Some(&matrix(1, &[(0, 0, 1)]).to_string()));
    assert_eq!(out, matrix(2, &[(1, 0, 1), (0, 1, 0)]));
}

#[test]
fn gamma_to_same_size_echoes() {
    let x = matrix(2, &[(0, 1, 0), (1, 1, -2), (0, 0, 3)]);
    assert_eq!(run_json(&["apply", "gamma", "--from", "2", "--to", "2"], Some(&x.to_string())), x);
}

#[test]
fn rho_on_e01() {
    let out = run_json(&["apply", "rho", "--sizes", "1,2", "--stage", "2"], Some(&matrix(2, &[(0, 1, 0)]).to_string()));
    assert_eq!(out, json!({ "depth": 2, "coeffs": { "U:1": { "depth": 2, "values": [one(), {}] } } }));
}

#[test]
fn apply_output_reparses() {
    let x = matrix(2, &[(0, 1, 1), (1, 0, -1), (1, 1, 2)]);
    let once = run_json(&["apply", "gamma", "--from", "2", "--to", "6"], Some(&x.to_string()));
    assert_eq!(run_json(&["apply", "gamma", "--from", "6", "--to", "6"], Some(&once.to_string())), once);

    let odo = run_json(&["apply", "rho", "--sizes", "1,2,4", "--stage", "2"], Some(&x.to_string()));
    let flipped = run_json(&["apply", "psi", "--sizes", "1,2,4"], Some(&odo.to_string()));
    assert_eq!(flipped["depth"], 2);

    let blocks = block_matrix(2, 1, &[(0, 1, 1), (1, 0, -1), (1, 1, 2)]);
    let shuffled = run_json(&["apply", "shuffle", "--p", "2", "--n", "1"], Some(&blocks.to_string()));
    assert_eq!(shuffled["size"], 2);
    let back = run(&["apply", "gamma", "--from", "2", "--to", "2", "--angle", "theta/2"], Some(&shuffled.to_string()));
    assert_eq!(back.status.code(), Some(0));
}

#[test]
fn trace_examples() {
    let trace = |x: Value| run_json(&["trace"], Some(&x.to_string()));
    assert_eq!(trace(matrix(3, &[(0, 0, 0), (1, 1, 0), (2, 2, 0)])), json!("1"));
    assert_eq!(trace(matrix(1, &[(0, 0, 1)])), json!("0"));
    assert_eq!(trace(matrix(4, &[(0, 0, 0)])), json!("1/4"));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["trace"], Some("not json")).status.code(), Some(2));
    let x = matrix(2, &[(0, 0, 0)]).to_string();
    assert_eq!(run(&["apply", "gamma", "--from", "1", "--to", "2"], Some(&x)).status.code(), Some(2));
    assert_eq!(run(&["apply", "gamma", "--from", "2", "--to", "3"], Some(&x)).status.code(), Some(2));
    assert_eq!(run(&["apply", "rho", "--sizes", "1,2", "--stage", "3"], Some(&x)).status.code(), Some(2));
    assert_eq!(run(&["apply", "shuffle", "--p", "2", "--n", "1", "--algebra", "cyclic"], Some(&x)).status.code(), Some(2));
    assert_eq!(run(&["verify", "nope"], None).status.code(), Some(2));
    assert_eq!(run(&["verify", "rg", "--sizes", "1,3,4"], None).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let report = run_json(&["verify", "trace-compat", "--sizes", "1,2,4", "--algebra", "circle", "--count", "100"], None);
    assert_eq!(report["failures"], json!([]));
    assert_eq!(report["cases"], 300);
    let report = run_json(&["verify", "rg", "--sizes", "1,2,6"], None);
    assert_eq!(report["failures"], json!([]));
    let report = run_json(&["verify", "gamma-hom", "--sizes", "1,3", "--count", "0"], None);
    assert_eq!(report["cases"], 0);
    let report = run_json(&["verify", "rho-hom", "--sizes", "1,3", "--algebra", "cyclic", "--modulus", "4", "--count", "3"], None);
    assert_eq!(report["config"]["algebra"], json!({ "kind": "cyclic", "modulus": 4 }));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["verify", "gamma-hom", "--sizes", "1,2,6", "--seed", "7", "--count", "5"];
    let a = run(&args, None);
    let b = run(&args, None);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let other = run(&["verify", "gamma-hom", "--sizes", "1,2,6", "--seed", "8", "--count", "5"], None);
    assert_eq!(other.status.code(), Some(0));
}

#[test]
fn report_goes_to_out_file() {
    let path = std::env::temp_dir().join(format!("bd-lab-report-{}.json", std::process::id()));
    let out = run(&["verify", "flip", "--sizes", "1,2,4", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(report["suite"], "flip");
}

#[test]
fn classify_examples() {
    let decide = |extra: &[&str]| {
        let mut args = vec!["classify", "--angle1", "theta", "--delta1", "2^inf"];
        args.extend_from_slice(extra);
        run_json(&args, None)
    };
    let d = decide(&["--angle2", "theta+1/4", "--delta2", "2^inf"]);
    assert_eq!(d["decision"]["answer"], "isomorphic");
    assert_eq!(d["decision"]["witness"]["denominator"], "4");
    let d = decide(&["--amplify", "2", "--angle2", "theta", "--delta2", "2^inf"]);
    assert_eq!(d["decision"]["answer"], "not isomorphic");
    assert_eq!(d["amplified"]["angle"], "1/2*theta");
    assert_eq!(decide(&["--angle2", "theta", "--delta2", "2^inf"])["decision"]["answer"], "isomorphic");
    let d = decide(&["--angle2", "theta", "--delta2", "1,2,4"]);
    assert_eq!(d["decision"]["finiteEvidence"], true);
    let d = decide(&["--angle2", "theta+1/8", "--delta2", "1,2,4;tail=2"]);
    assert_eq!(d["decision"]["answer"], "isomorphic");

    let f = run_json(&["classify", "--modulus", "3", "--sizes", "1,2,4"], None);
    assert_eq!((f["simplicity"]["answer"].clone(), f["traceUniqueness"]["answer"].clone()), (json!(true), json!(true)));
    assert_eq!(run(&["classify", "--angle1", "1/2", "--delta1", "2^inf", "--angle2", "theta", "--delta2", "2"], None).status.code(), Some(2));
    assert_eq!(run(&["classify"], None).status.code(), Some(2));
}

#[test]
fn ktheory_budget() {
    let args = ["ktheory", "--sizes", "1,2,4", "--stage", "3", "--a", "2", "--b", "-1", "--theta-cf", "0;;2"];
    let k = run_json(&args, None);
    assert_eq!(k["class"]["K0"], json!({ "q": "1/2", "m": -1 }));
    assert_eq!(k["class"]["positive"], true);
    assert_eq!(k["delta"]["finiteEvidence"], true);
    let mut tight = args.to_vec();
    tight.extend(["--budget", "1"]);
    assert_eq!(run(&tight, None).status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_bd-lab")).args(args).env("BD_LAB_BUDGET", "1").output().unwrap();
    assert_eq!(env.status.code(), Some(3));
}
