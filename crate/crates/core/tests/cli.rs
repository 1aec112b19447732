use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tpcheck(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tpcheck")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = if stdout.trim().is_empty() { Value::Null } else { serde_json::from_str(&stdout).unwrap() };
    (out.status.code().unwrap(), value, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn check_tp_vandermonde_passes() {
    let (code, r, _) = tpcheck(&["check-tp", &fixture("vdm3.json"), "-k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["certificate"]["type"], "Pass");
    assert_eq!(r["mode"], "exact");
    assert!(r["input_digest"].as_str().unwrap().starts_with("sha256:"));
    for method in ["brute", "contiguous", "certificate"] {
        assert_eq!(tpcheck(&["check-tp", &fixture("vdm3.json"), "-k", "3", "--method", method]).0, 0);
    }
}

#[test]
fn check_tp_zeros3x4_is_refuted() {
    let (code, r, _) = tpcheck(&["check-tp", &fixture("zeros3x4.json"), "-k", "3", "--method", "brute"]);
    assert_eq!(code, 1);
    assert_eq!(r["certificate"]["type"], "FailingMinor");
    assert_eq!(r["certificate"]["rows"], serde_json::json!([1]));
    assert_eq!(r["certificate"]["cols"], serde_json::json!([3]));
    assert_eq!(r["certificate"]["value"], "0");
}

#[test]
fn check_tn_zeros3x4_names_the_negative_minor() {
    let (code, r, _) = tpcheck(&["check-tn", &fixture("zeros3x4.json"), "-k", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r["certificate"]["type"], "SignReversalWitness");
    assert_eq!(r["witness_minor"], serde_json::json!({ "rows": [1, 2, 3], "cols": [1, 2, 4], "value": "-1" }));
}

#[test]
fn hull_commands_on_example_hull() {
    let (a, b) = (fixture("hull_a.json"), fixture("hull_b.json"));
    let (code, r, _) = tpcheck(&["hull-tn", &a, &b, "-k", "3"]);
    assert_eq!(code, 1);
    let failing = &r["subject"]["failing"];
    assert_eq!(failing["test_matrix"]["type"], "I_zz");
    assert_eq!(failing["member"], true);
    assert!(failing["witness_minor"]["value"].as_str().unwrap().starts_with('-'));

    // Zero columns rule out TP_1 for every member.
    let (code, r, _) = tpcheck(&["hull-tp", &a, &b, "-k", "1"]);
    assert_eq!(code, 1);
    assert_eq!(r["subject"]["failing"]["test_matrix"]["type"], "C+");
}

#[test]
fn hull_tn_family_budget_is_exit_three() {
    let (code, _, err) =
        tpcheck(&["hull-tn", &fixture("hull_a.json"), &fixture("hull_b.json"), "-k", "3", "--budget", "4"]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
}

#[test]
fn csv_input_and_p_matrix() {
    let (code, r, _) = tpcheck(&["check-tp", &fixture("neg2.csv"), "-k", "2"]);
    assert_eq!(code, 1);
    assert_eq!(r["certificate"]["type"], "SignReversalWitness");
    assert_eq!(tpcheck(&["p-matrix", &fixture("vdm3.json")]).0, 0);
    assert_eq!(tpcheck(&["p-matrix", &fixture("neg2.csv")]).0, 1);
    assert_eq!(tpcheck(&["p-matrix", &fixture("hull_a.json")]).0, 2);
}

#[test]
fn pf_check_modes() {
    assert_eq!(tpcheck(&["pf-check", &fixture("seq131.json"), "-k", "3"]).0, 0);
    let (code, r, _) = tpcheck(&["pf-check", &fixture("seq111.json"), "-k", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r["certificate"]["type"], "FailingToeplitzMinor");
    // Finite support: zeros outside the support rule out strict positivity.
    assert_eq!(tpcheck(&["pf-check", &fixture("seq131.json"), "-k", "1", "--mode", "tp"]).0, 1);
    let (code, r, _) =
        tpcheck(&["pf-check", &fixture("seq131.json"), "-k", "2", "--mode", "tp", "--samples", "20", "--seed", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r["certificate"]["type"], "KernelWitness");
}

#[test]
fn randomized_commands_require_a_seed() {
    let spec = r#"{"kind": "random-signed", "rows": 3, "cols": 3}"#;
    assert_eq!(tpcheck(&["generate", spec]).0, 2);
    let (code, first, _) = tpcheck(&["generate", spec, "--seed", "11"]);
    assert_eq!(code, 0);
    assert_eq!(tpcheck(&["generate", spec, "--seed", "11"]).1, first);
    assert_eq!(tpcheck(&["pf-check", &fixture("seq131.json"), "-k", "2", "--mode", "tp", "--samples", "5"]).0, 2);
}

#[test]
fn generate_from_file_round_trips_into_checks() {
    let (code, r, _) = tpcheck(&["generate", &fixture("cauchy_spec.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["labels"], serde_json::json!({ "tp": 3, "tn": 3 }));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cauchy.json");
    std::fs::write(&path, r.to_string()).unwrap();
    assert_eq!(tpcheck(&["check-tp", path.to_str().unwrap(), "-k", "3"]).0, 0);

    let hull = r#"{"kind": "perturbed-hull", "base": {"kind": "vandermonde", "nodes": ["1", "2", "3"], "cols": 3}, "epsilon": "1/1000"}"#;
    let (code, r, _) = tpcheck(&["generate", hull]);
    assert_eq!(code, 0);
    assert!(r["a"]["entries"].is_array() && r["b"]["entries"].is_array());
}

#[test]
fn malformed_input_reports_position() {
    let (code, _, err) = tpcheck(&["check-tp", &fixture("malformed.json"), "-k", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("entries[1][1]"), "{err}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "1,2\n3,oops\n").unwrap();
    let (code, _, err) = tpcheck(&["check-tp", path.to_str().unwrap(), "-k", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2, field 2"), "{err}");
    assert_eq!(tpcheck(&["check-tp", "/nonexistent/file.json", "-k", "1"]).0, 2);
    assert_eq!(tpcheck(&["check-tp", &fixture("vdm3.json"), "-k", "4"]).0, 2);
    assert_eq!(tpcheck(&["no-such-command"]).0, 2);
}

#[test]
fn bench_counts() {
    let (code, r, _) = tpcheck(&["bench", &fixture("vdm3.json"), "-k", "3"]);
    assert_eq!(code, 0);
    // sum_r C(3,r)^2 = 9 + 9 + 1 and sum_r (4-r)^2 = 9 + 4 + 1.
    assert_eq!(r["brute_force"]["determinants"], 19);
    assert_eq!(r["contiguous"]["determinants"], 14);
}

#[test]
fn float_mode_is_labelled_numerical() {
    let (code, r, _) = tpcheck(&["--float", "check-tp", &fixture("vdm3.json"), "-k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["mode"], "numerical(eps=1e-9)");
    let (code, r, _) = tpcheck(&["check-tp", &fixture("neg2.csv"), "-k", "2", "--float", "--eps", "1e-6"]);
    assert_eq!(code, 1);
    assert_eq!(r["mode"], "numerical(eps=1e-6)");
}

fn verify(report: &Value) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    std::fs::write(&path, serde_json::to_string_pretty(report).unwrap()).unwrap();
    let (code, v, _) = tpcheck(&["verify-cert", path.to_str().unwrap()]);
    (code, v)
}

#[test]
fn reports_round_trip_through_verify_cert() {
    let (a, b) = (fixture("hull_a.json"), fixture("hull_b.json"));
    let cases: Vec<Vec<String>> = vec![
        vec!["check-tp".into(), fixture("vdm3.json"), "-k".into(), "3".into()],
        vec!["check-tp".into(), fixture("neg2.csv"), "-k".into(), "2".into()],
        vec!["check-tp".into(), fixture("zeros3x4.json"), "-k".into(), "3".into(), "--method".into(), "brute".into()],
        vec!["check-tn".into(), fixture("zeros3x4.json"), "-k".into(), "3".into()],
        vec!["hull-tn".into(), a.clone(), b.clone(), "-k".into(), "3".into()],
        vec!["hull-tp".into(), a, b, "-k".into(), "2".into()],
        vec!["pf-check".into(), fixture("seq111.json"), "-k".into(), "3".into()],
        vec!["p-matrix".into(), fixture("neg2.csv")],
        vec!["--float".into(), "check-tp".into(), fixture("neg2.csv"), "-k".into(), "2".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, report, _) = tpcheck(&args);
        let (vcode, v) = verify(&report);
        assert_eq!(vcode, 0, "{args:?}: {v}");
        assert_eq!(v["valid"], true);
        assert_eq!(v["holds"], code == 0, "{args:?}");
    }
}

#[test]
fn verify_cert_rejects_tampered_reports() {
    let (_, report, _) = tpcheck(&["check-tn", &fixture("zeros3x4.json"), "-k", "3"]);
    let mut forged = report.clone();
    forged["certificate"]["x"][0] = Value::String("3".into());
    assert_eq!(verify(&forged).0, 1);

    let mut forged = report.clone();
    forged["subject"]["matrix"]["entries"][0][0] = Value::String("100".into());
    assert_eq!(verify(&forged).0, 1);

    let (_, hull, _) = tpcheck(&["hull-tn", &fixture("hull_a.json"), &fixture("hull_b.json"), "-k", "3"]);
    let mut forged = hull;
    forged["subject"]["failing"]["matrix"]["entries"][0][0] = Value::String("7".into());
    assert_eq!(verify(&forged).0, 1);

    let mut garbage = report;
    garbage["certificate"] = serde_json::json!({ "type": "Nonsense" });
    assert_eq!(verify(&garbage).0, 2);
}
