use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_alia-kit"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("ALIAKIT_THREADS", t),
        None => cmd.env_remove("ALIAKIT_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn icosahedral_group_info() {
    let v = json(&["group", "info", "--kind", "Y"]);
    assert_eq!(v["order"], 60);
    assert_eq!(v["nu"], serde_json::json!([5, 3, 2]));
    assert_eq!(v["ground_form_degrees"], serde_json::json!([12, 20, 30]));
}

#[test]
fn a2_norm_three_three_has_two_classes() {
    let v = json(&["rootcoh", "enumerate", "--phi", "A2", "--kappa", "3,3", "--cap01", "--classify"]);
    assert_eq!(v["class_count"], 2);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn dihedral_suite_passes() {
    let v = json(&["verify", "--suite", "dihedral"]);
    assert_eq!(v["failed"], 0);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["id"] == "dihedral/D3/j1/pole-a/normal-form"));
    assert!(checks.iter().all(|c| c["status"] == "PASS"));
}

#[test]
fn output_is_byte_stable_across_runs_and_thread_counts() {
    let cases: [&[&str]; 3] = [
        &["rootcoh", "enumerate", "--phi", "B2", "--kappa", "3", "--cap01", "--classify", "--brackets"],
        &["alia", "dihedral", "--N", "4", "--j", "1", "--orbit", "generic:2,1/3"],
        &["moi", "--N", "3", "--j", "1", "--out", "csv"],
    ];
    for args in cases {
        let one = run(args, Some("1"));
        assert!(one.status.success(), "{args:?}");
        for threads in [Some("1"), Some("4"), None] {
            assert_eq!(run(args, threads).stdout, one.stdout, "{args:?} with {threads:?} threads");
        }
    }
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        &["group", "info"][..],
        &["rootcoh", "enumerate", "--phi", "Q7", "--kappa", "1"],
        &["molien", "--group", "D", "--N", "5", "--char", "nope"],
        &["alia", "dihedral", "--N", "3", "--j", "1", "--orbit", "generic:1"],
        &["frobnicate"],
    ] {
        let out = run(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["group", "info", "--kind", "T"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_file_has_one_graph_per_class() {
    let path = std::env::temp_dir().join(format!("alia-kit-test-{}.dot", std::process::id()));
    let p = path.to_str().unwrap();
    let v = json(&["rootcoh", "enumerate", "--phi", "A3", "--kappa", "5", "--cap01", "--classify", "--dot", p]);
    let dot = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["class_count"], 1);
    assert_eq!(dot.matches("graph \"A3_0\"").count(), 1);
    assert!(dot.contains("style=filled"));
    assert!(dot.contains(" -- "));
}

#[test]
fn csv_renders_the_primary_table() {
    let out = run(&["ground-forms", "--group", "D3", "--out", "csv"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "degree,form,nu,orbit,orbit_size");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,X*Y,3,a,"));
}

#[test]
fn lie_evaluation_matches_the_table() {
    let v = json(&["evaluate", "--lie", "sp", "--dim", "6"]);
    let got: Vec<&str> = v["orbits"].as_array().unwrap().iter().map(|o| o["subalgebra"].as_str().unwrap()).collect();
    assert_eq!(got, ["sl2+C+C", "sl2+sl2+C", "sl3+C"]);
}

#[test]
fn cartan_search_reports_per_instance() {
    let v = json(&["alia", "cartan-search", "--N", "3", "--j", "1", "--orbit", "generic:2,3", "--max-coeff", "3"]);
    assert_eq!(v["found"], true);
    assert_eq!(v["killing_value"], "8");
    let v = json(&["alia", "cartan-search", "--N", "3", "--j", "1", "--orbit", "generic:2,3", "--max-coeff", "1"]);
    assert_eq!(v["found"], false);
    assert!(v["coefficients"].is_null());
}
