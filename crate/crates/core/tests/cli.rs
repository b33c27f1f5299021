use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn piewb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_piewb"))
        .args(args)
        .env_remove("PIEWB_BUDGET")
        .output()
        .expect("piewb runs")
}

fn on(file: &str, args: &[&str]) -> Output {
    let path = corpus(file);
    let mut all = vec!["-w", path.to_str().unwrap()];
    all.extend_from_slice(args);
    piewb(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

/// Runs with `--report` and checks the report against the schema.
fn reported(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut all = vec!["--report", path.to_str().unwrap()];
    all.extend_from_slice(args);
    let o = piewb(&all);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).expect("report written")).unwrap();
    let s = schema();
    if let Err(errors) = s.validate(&report) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("report violates the schema: {msgs:?}");
    }
    (code(&o), report)
}

#[test]
fn passing_check_exits_zero() {
    let o = on("sets_injections.cat", &["check", "Inj"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS coherent"));
}

#[test]
fn failing_property_exits_one() {
    let o = on("idempotent.cat", &["check", "Idem"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL concrete-monos"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(code(&piewb(&["bogus"])), 2);
    assert_eq!(code(&on("sets_injections.cat", &["check", "Nope"])), 2);
    assert_eq!(code(&on("sets_injections.cat", &["verify", "th99"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cat");
    std::fs::write(&bad, "category K { objects A; hom A B = f }\n").unwrap();
    let o = piewb(&["-w", bad.to_str().unwrap(), "print"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("resolution error"));
}

#[test]
fn exhausted_budgets_exit_three() {
    assert_eq!(code(&on("sets_injections.cat", &["sigma", "Inj", "--budget", "1"])), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_piewb"))
        .args(["search29", "--n", "5"])
        .env("PIEWB_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn inserter_pipeline_checks_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ins.cat");
    let lim = on(
        "equifier_identity.cat",
        &["limit", "inserter", "I", "I", "--name", "Ins", "--out", out.to_str().unwrap()],
    );
    assert_eq!(code(&lim), 0, "{}", String::from_utf8_lossy(&lim.stderr));
    let o = piewb(&["-w", out.to_str().unwrap(), "check", "Ins"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = piewb(&["-w", out.to_str().unwrap(), "check", "P"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS functor"));
}

#[test]
fn limit_output_reparses_to_itself() {
    let first = on("control_pair.cat", &["limit", "pseudopullback", "K1", "K2"]);
    assert_eq!(code(&first), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psb.cat");
    std::fs::write(&path, &first.stdout).unwrap();
    let again = piewb(&["-w", path.to_str().unwrap(), "print"]);
    assert_eq!(stdout(&again), stdout(&first));
}

#[test]
fn sigma_emits_a_signature_block() {
    let o = on("sets_injections.cat", &["sigma", "Inj", "--basis"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("signature Sigma_Inj"));
}

#[test]
fn certificates_recheck_to_the_same_failure() {
    for (file, suite, check) in [
        ("relativized_reduct.cat", "lemma35", "coherent-functor"),
        ("product_not_replete.cat", "prop27", "replete"),
        ("search_candidate.cat", "search29", "iso-full"),
    ] {
        let o = on(file, &["recheck", suite]);
        assert_eq!(code(&o), 1, "{file}");
        assert!(stdout(&o).contains(&format!("FAIL {check}")), "{file}: {}", stdout(&o));
    }
}

#[test]
fn command_reports_match_the_schema() {
    let path = corpus("idempotent.cat");
    let (code, r) = reported(&["-w", path.to_str().unwrap(), "check", "Idem"]);
    assert_eq!(code, 1);
    assert_eq!(r["command"], "check");
    assert_eq!(r["exit_code"], 1);
    let path = corpus("sets_injections.cat");
    let (code, r) = reported(&["-w", path.to_str().unwrap(), "classify", "Inj"]);
    assert_eq!(code, 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["outcome"] == "pass"));
}

#[test]
fn schema_rejects_malformed_reports() {
    let path = corpus("sets_injections.cat");
    let (_, mut r) = reported(&["-w", path.to_str().unwrap(), "check", "Inj"]);
    let s = schema();
    assert!(s.is_valid(&r));
    r["checks"][0]["outcome"] = "maybe".into();
    assert!(!s.is_valid(&r));
    r["checks"][0]["outcome"] = "pass".into();
    r["extra"] = 1.into();
    assert!(!s.is_valid(&r));
}

#[test]
fn suite_reports_match_the_schema_and_write_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let certs = dir.path().join("certs");
    let (code, r) = reported(&["verify", "lemma35", "--n", "40", "--seed", "0", "--certs", certs.to_str().unwrap()]);
    let failed = r["failed"].as_u64().unwrap();
    assert_eq!(code, if failed > 0 { 1 } else { 0 });
    for rec in r["records"].as_array().unwrap().iter().filter(|x| x["verdict"] == "fail") {
        let file = certs.join(rec["certificate_ref"].as_str().unwrap());
        let o = piewb(&["-w", file.to_str().unwrap(), "recheck", "lemma35"]);
        assert_eq!(o.status.code(), Some(1));
    }
    let (code, r) = reported(&["verify", "th23", "--n", "20"]);
    assert_eq!(code, 0);
    assert_eq!(r["attempted"], 20);
}

#[test]
fn search_report_carries_the_caveat() {
    let (_, r) = reported(&["search29", "--n", "10", "--budget", "60"]);
    assert_eq!(r["suite"], "search29");
    assert!(r["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("does not settle")));
}
