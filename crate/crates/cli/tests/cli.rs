use std::fs;
use std::process::{Command, Output};

fn bk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baileykit")).args(args).env_remove("BAILEYKIT_DEFAULT_ORDER").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_shows_every_row() {
    let o = bk(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for id in ["RR1", "KMRR", "T8PSI8", "EXT63", "QULTRA_CONN"] {
        assert!(s.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
    assert!(s.contains("k:positive-integer") || s.contains("k:"));
}

#[test]
fn verify_passes() {
    let o = bk(&["verify", "K1MRR", "--param", "m=5", "--order", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("pass K1MRR order=40 m=5"));
}

#[test]
fn q_order_doubles() {
    let o = bk(&["verify", "RR2", "--q-order", "15"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("pass RR2 order=30"));
    let o = bk(&["verify", "RR2", "--q-order", "15", "--order", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coeffs_of_rogers_ramanujan_product() {
    let o = bk(&["coeffs", "RR1", "--side", "rhs", "--order", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(&lines[..5], ["0 1", "2 1", "4 1", "6 1", "8 2"]);
    assert_eq!(lines.last().unwrap(), "20 6");
}

#[test]
fn usage_and_constraint_errors_exit_2() {
    assert_eq!(bk(&["verify", "KMRR", "--param", "k=0", "--param", "m=1"]).status.code(), Some(2));
    assert_eq!(bk(&["verify", "NOPE"]).status.code(), Some(2));
    assert_eq!(bk(&["verify", "RR1", "--param", "zz=1"]).status.code(), Some(2));
    assert_eq!(bk(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn evaluation_error_exits_3() {
    // a missing parameter is only noticed when the sides are built
    let o = bk(&["verify", "T8PSI8", "--param", "m=1", "--param", "alpha=3q^3", "--order", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("error T8PSI8"));
}

#[test]
fn verify_all_malformed_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "RR1 order=20\n# fine\nKMRR k=2 m=1 =3\n").unwrap();
    let o = bk(&["verify-all", "--file", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.txt:3:14"), "{err}");
}

#[test]
fn verify_all_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("suite.txt");
    let text = "RR1\nRR2 order=30\nKMRR k=2 m=3 order=40\nK1MGG_ODD m=5\nQULTRA_CONN n=3 beta=2q c=3q order=20\n";
    fs::write(&p, text).unwrap();
    let one = bk(&["verify-all", "--file", p.to_str().unwrap(), "--jobs", "1", "--order", "24"]);
    let four = bk(&["verify-all", "--file", p.to_str().unwrap(), "--jobs", "4", "--order", "24"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let s = stdout(&one);
    assert!(s.lines().next().unwrap().starts_with("pass RR1 order=24"));
    assert!(s.ends_with("5 passed, 0 failed, 0 errors\n"));
}

#[test]
fn json_report() {
    let dir = tempfile::tempdir().unwrap();
    let inp = dir.path().join("in.txt");
    fs::write(&inp, "RR1 order=20\nKMRR k=2 m=1 order=20\n").unwrap();
    let out = dir.path().join("r.json");
    let o = bk(&["report", "--format", "json", "--out", out.to_str().unwrap(), "--file", inp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[1]["id"], "KMRR");
    assert_eq!(arr[1]["params"]["k"], 2);
    assert_eq!(arr[1]["status"], "pass");
    for key in ["order", "terms_summed", "elapsed_ms"] {
        assert!(arr[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn text_report_of_sample_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = bk(&["report", "--format", "text", "--out", out.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let t = fs::read_to_string(&out).unwrap();
    assert!(t.ends_with("23 passed, 0 failed, 0 errors\n"));
}
