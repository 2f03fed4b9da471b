use std::path::PathBuf;
use std::process::{Command, Output};

use galois_core::exactnum::CycloField;
use galois_core::text::parse_polynomial;
use galois_scope::instance::Instance;
use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    let out = Command::new(env!("CARGO_BIN_EXE_galois-scope"))
        .args(args)
        .output()
        .expect("binary runs");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v, out)
}

#[test]
fn detect_on_inline_fermat_quartic() {
    let (code, v, _) = run(&[
        "galois-detect",
        "--poly",
        "x0^4 + x1^4 + x2^4",
        "--n",
        "1",
        "--field",
        "4",
        "--matrix",
        "z(4),0,0;0,1,0;0,0,1",
    ]);
    assert_eq!(code, 0);
    let c = &v["automorphisms"][0]["certificate"];
    assert_eq!(c["kind"], "outer");
    assert_eq!(c["point"], serde_json::json!(["1", "0", "0"]));
}

#[test]
fn inhomogeneous_input_is_rejected() {
    let (code, v, _) = run(&["check-smooth", "--poly", "x0^4 + x1^3", "--n", "1"]);
    assert_eq!(code, 2);
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains("term 2"), "{msg}");
}

#[test]
fn singular_curve_gets_a_witness() {
    let (code, v, _) = run(&["check-smooth", "--poly", "x0^4 + x1^4", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["smoothness"]["status"], "certified_singular");
    assert_eq!(
        v["smoothness"]["witness"],
        serde_json::json!(["0", "0", "1"])
    );
}

#[test]
fn short_deadline_never_misclassifies() {
    let (code, v, _) = run(&["check-smooth", &corpus("exa2"), "--deadline", "1"]);
    match code {
        0 => assert_eq!(v["smoothness"]["status"], "certified_smooth"),
        3 => assert_eq!(v["smoothness"]["status"], "timeout"),
        c => panic!("exit {c}: {v}"),
    }
}

#[test]
fn sextic_expectations() {
    let (code, v, _) = run(&["classify-cyclic", &corpus("exa1")]);
    assert_eq!(code, 0);
    let a = &v["automorphisms"][0];
    assert_eq!(a["table1"]["n_of_g"], 2);
    assert_eq!(a["table1"]["rows"][0]["row"], 4);
    let (code, v, _) = run(&["galois-detect", &corpus("exa1"), "--all-powers"]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("\"certificate\":null"), "{v}");
    let (code, v, _) = run(&["corpus-run", &corpus("exa1"), "--random", "0"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn fermat_quotient() {
    let (code, v, _) = run(&["rh-genus", &corpus("ex1-fermat"), "--group", "G"]);
    assert_eq!(code, 0, "{v}");
    let g = serde_json::to_string(&v).unwrap();
    for key in [
        "\"quotient_genus\":0",
        "\"stabilizer_sum\":12",
        "\"euler_term\":-4",
    ] {
        assert!(g.contains(key), "{key} missing in {g}");
    }
}

#[test]
fn failed_expectation_exits_one() {
    let text = std::fs::read_to_string(corpus("exa1")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["expect"]["automorphisms"]["g"]["order"] = Value::from(6);
    let dir = std::env::temp_dir().join(format!("galois-scope-fail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wrong.json");
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let (code, out, _) = run(&["corpus-run", dir.to_str().unwrap(), "--random", "0"]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(code, 1, "{out}");
    assert_eq!(out["failed"][0], "exa1");
}

#[test]
fn corpus_run_is_deterministic_across_job_counts() {
    let (c1, a, _) = run(&["corpus-run", "--random", "6", "--jobs", "1", "--seed", "5"]);
    let (c2, b, _) = run(&["corpus-run", "--random", "6", "--jobs", "4", "--seed", "5"]);
    assert_eq!(c1, 0, "{a}");
    assert_eq!(c2, 0);
    assert_eq!(a, b);
}

#[test]
fn single_command_reproduces_the_corpus_entry() {
    let (_, full, _) = run(&["corpus-run", &corpus("exa5"), "--random", "0"]);
    let (_, fix, _) = run(&["fix-locus", &corpus("exa5")]);
    let entry = &full["reports"][0];
    assert_eq!(entry["hash"], fix["hash"]);
    assert_eq!(
        entry["automorphisms"][0]["fixed_locus"],
        fix["automorphisms"][0]["fixed_locus"]
    );
}

#[test]
fn corpus_polynomials_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let files = galois_scope::corpus::corpus_files(&dir).unwrap();
    assert!(files.len() >= 10);
    for path in files {
        let inst = Instance::load(&path, None).unwrap();
        let f = inst.x.polynomial();
        let field: &CycloField = inst.x.field();
        let again = parse_polynomial(&f.to_string(), f.nvars(), field).unwrap();
        assert_eq!(&again, f, "{}", path.display());
    }
}
