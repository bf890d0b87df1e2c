use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ccma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccma")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn feasibility_examples() {
    let o = ccma(&["feasibility", "--q", "4", "--n", "4", "--curve", "case-study"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("feasible"));
    let o = ccma(&["feasibility", "--q", "4", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("2n-1 regime"));
    let o = ccma(&["feasibility", "--n", "4", "--curve", "case-study-over-f2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("N1 = 3 < 2n+2g-2 = 8"));
}

#[test]
fn construct_verify_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let rows = [
        ("baseline", "mu_s = 51, mu_s0 = 71, mu_s1 = 76, mu_b = 8, mu_m = 59"),
        ("design_a", "mu_s = 33, mu_s0 = 53, mu_s1 = 76, mu_b = 8, mu_m = 41"),
        ("design_b", "mu_s = 42, mu_s0 = 52, mu_s1 = 86, mu_b = 8, mu_m = 50"),
    ];
    for (name, row) in rows {
        let doc = dir.path().join(format!("{name}.json"));
        let o = ccma(&["construct", "--config", path(&fixture(&format!("{name}.json"))), "--output", path(&doc)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let o = ccma(&["verify", "--config", path(&doc)]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains("PASS 65536 pairs"));
        let csv = dir.path().join(format!("{name}.csv"));
        let o = ccma(&["report", "--config", path(&doc), "--output", path(&csv)]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains(row), "{}", stdout(&o));
        assert!(stdout(&o).contains("3n(2n+g-1) = 96"));
        let table = std::fs::read_to_string(&csv).unwrap();
        assert!(table.lines().nth(2).unwrap().starts_with("worst-case,4,8,0,0,0,0,96"));
    }
    let o = ccma(&["verify", "--config", path(&dir.path().join("design_b.json")), "--random", "1000"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS 1000 random pairs"));
}

#[test]
fn construct_is_byte_stable() {
    let a = ccma(&["construct", "--config", path(&fixture("design_b.json"))]);
    let b = ccma(&["construct", "--config", path(&fixture("design_b.json"))]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupted_document_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("doc.json");
    assert_eq!(code(&ccma(&["construct", "--config", path(&fixture("baseline.json")), "--output", path(&doc)])), 0);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&doc).unwrap()).unwrap();
    let entry = v["matrices"]["r"][1][2].as_u64().unwrap();
    v["matrices"]["r"][1][2] = serde_json::json!((entry + 1) % 4);
    std::fs::write(&doc, v.to_string()).unwrap();
    let o = ccma(&["verify", "--config", path(&doc)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("matrix r entry (1, 2)"), "{out}");
    assert!(out.contains("FAIL product of"), "{out}");
}

#[test]
fn multiply_prints_the_product() {
    let o = ccma(&["multiply", "--config", path(&fixture("baseline.json")), "--x", "0,1,0,0", "--y", "0,0,0,1"]);
    assert_eq!(code(&o), 0);
    // X * X^3 = X^4 = X^3 + w X^2 + w X + w modulo Q = X^4 + X^3 + w X^2 + w X + w
    assert_eq!(stdout(&o).trim(), "2,2,2,1");
}

#[test]
fn optimize_is_deterministic_and_logs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, out: &str| {
        let doc = dir.path().join(out);
        let o = ccma(&[
            "optimize",
            "--config",
            path(&fixture("search_joint.json")),
            "--strategy",
            "hillclimb",
            "--criterion",
            "zeros+ones",
            "--budget",
            "4000",
            "--seed",
            "9",
            "--jobs",
            jobs,
            "--output",
            path(&doc),
        ]);
        assert!(code(&o) == 0 || code(&o) == 3, "{}", String::from_utf8_lossy(&o.stderr));
        (std::fs::read(&doc).unwrap(), std::fs::read_to_string(doc.with_extension("log.csv")).unwrap())
    };
    let (a, log_a) = run("1", "a.json");
    let (b, log_b) = run("3", "b.json");
    assert_eq!(a, b);
    assert_eq!(log_a, log_b);
    assert!(log_a.starts_with("evaluated,objective,secondary\n0,"));
    let o = ccma(&["verify", "--config", path(&dir.path().join("a.json")), "--random", "200"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"field": {"p": 2, "m": 2}}"#).unwrap();
    assert_eq!(code(&ccma(&["construct", "--config", path(&bad)])), 2);
    assert_eq!(code(&ccma(&["construct", "--config", path(&dir.path().join("missing.json"))])), 2);
    // searching needs a kernel-type starting basis
    let o = ccma(&["optimize", "--config", path(&fixture("baseline.json")), "--criterion", "zeros", "--scope", "joint", "--strategy", "greedy-minweight"]);
    assert_eq!(code(&o), 2);
    let o = ccma(&["optimize", "--config", path(&fixture("search_joint.json")), "--strategy", "greedy-minweight", "--target", "40"]);
    assert_eq!(code(&o), 3);
    let o = ccma(&["optimize", "--config", path(&fixture("search_joint.json")), "--strategy", "greedy-minweight", "--target", "53"]);
    assert_eq!(code(&o), 0);
}
