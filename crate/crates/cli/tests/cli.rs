use std::path::PathBuf;
use std::process::{Command, Output};

use etaforms::{
    CriterionResult, IdentityReport, MembershipReport, PointCount, QSeries, Registry, SolveOutcome, VerificationReport,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etaforms"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Parses json output and checks it serializes back to the same document.
fn round_trip<T: DeserializeOwned + Serialize>(o: &Output) -> T {
    let text = stdout(o);
    let value: T = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let original: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_value(&value).unwrap(), original);
    value
}

fn registry_file(name: &str, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut doc: serde_json::Value = serde_json::from_str(&Registry::embedded().to_json()).unwrap();
    edit(&mut doc);
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    path
}

#[test]
fn verify_passing_identity() {
    let o = run(&["verify", "--label", "F30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS F30 vs target 30: 13 coefficients compared"));

    let r: IdentityReport = round_trip(&run(&["verify", "--label", "F30", "--format", "json"]));
    assert!(r.pass);
    assert_eq!(r.compared, 13);
}

#[test]
fn count_matches_enumeration() {
    let pc: PointCount = round_trip(&run(&["count", "--curve", "E33A", "--prime", "2", "--format", "json"]));
    assert_eq!((pc.p, pc.count, pc.ap), (2, 2, 1));
    for method in ["naive", "charsum", "auto"] {
        let o = run(&[
            "count", "--curve", "E30A", "--prime", "7", "--method", method, "--format", "csv",
        ]);
        assert_eq!(stdout(&o), "p,count,a_p\n7,12,-4\n");
    }
    assert_eq!(
        run(&["count", "--curve", "E30A", "--prime", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn congruence_report() {
    let o = run(&["congruence", "--curve", "E44A", "--mod", "3", "--pmax", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerificationReport = round_trip(&run(&[
        "congruence",
        "--curve",
        "E44A",
        "--mod",
        "3",
        "--pmax",
        "1000",
        "--format",
        "json",
    ]));
    assert!(r.pass);
    assert_eq!(r.excluded_primes, vec![2, 11]);

    let o = run(&["congruence", "--curve", "E44A", "--mod", "5", "--pmax", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first counterexample"));
}

#[test]
fn modularity_pair() {
    let reports: Vec<VerificationReport> = round_trip(&run(&[
        "modularity",
        "--pair",
        "F40:E40A",
        "--pmax",
        "200",
        "--format",
        "json",
    ]));
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.pass));

    // a mismatched pair is a verification failure, not a usage error
    let o = run(&["modularity", "--pair", "F30:E38B", "--pmax", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["modularity", "--pair", "F30-E30A"]).status.code(), Some(2));
}

#[test]
fn membership_and_expand() {
    let reports: Vec<MembershipReport> = round_trip(&run(&["membership", "--level", "33", "--format", "json"]));
    assert!(reports.len() >= 4);
    assert!(reports.iter().all(|r| r.member));
    assert_eq!(run(&["membership", "--level", "31"]).status.code(), Some(2));

    let o = run(&["expand", "--label", "F33", "--terms", "9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s: QSeries = serde_json::from_value(v["series"].clone()).unwrap();
    assert_eq!(s.trunc(), 9);
    assert_eq!(
        stdout(&run(&["expand", "--label", "F33", "--terms", "3", "--format", "csv"])),
        "n,a_n\n0,0\n1,1\n2,1\n"
    );
    assert_eq!(
        run(&["expand", "--label", "F33", "--terms", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn solve_with_registry_and_literal_targets() {
    let basis = ["eta[3:3,15:3,1:-1,5:-1]", "L3", "L5", "L15"];
    let mut args = vec![
        "solve",
        "--level",
        "15",
        "--values",
        "0,1,-1,-1,-1",
        "--format",
        "json",
        "--basis",
    ];
    args.extend(basis);
    let out: SolveOutcome = round_trip(&run(&args));
    let SolveOutcome::Unique { coefficients } = out else {
        panic!("{out:?}")
    };
    assert_eq!(coefficients.len(), 4);

    let o = run(&["solve", "--level", "30", "--target", "30", "--basis", "L2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("inconsistent"));
    assert_eq!(
        run(&["solve", "--level", "33", "--target", "30", "--basis", "L3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["solve", "--level", "33", "--basis", "L3"]).status.code(), Some(2));
}

#[test]
fn unknown_labels_are_usage_errors() {
    let o = run(&["verify", "--label", "F99"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown expression label \"F99\""));
    assert_eq!(
        run(&["count", "--curve", "E99A", "--prime", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn perturbed_registry_changes_exit_status() {
    let path = registry_file("perturbed.json", |doc| {
        let t = doc["targets"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|t| t["label"] == "30")
            .unwrap();
        t["values"][7] = 4.into();
    });
    let o = run(&["--registry", path.to_str().unwrap(), "verify", "--label", "F30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));

    let path = registry_file("dangling.json", |doc| {
        doc["pairs"]
            .as_array_mut()
            .unwrap()
            .push(serde_json::json!({"expression": "F30", "curve": "E99A"}));
    });
    let o = run(&["--registry", path.to_str().unwrap(), "verify", "--label", "F30"]);
    assert_eq!(o.status.code(), Some(2));

    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("broken.json");
    std::fs::write(&path, "{\"expressions\": [").unwrap();
    assert_eq!(
        run(&["--registry", path.to_str().unwrap(), "verify", "--label", "F30"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["--registry", "/nonexistent/registry.json", "verify", "--label", "F30"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_all_exit_status_tracks_results() {
    let o = run(&[
        "verify-all",
        "--pmax",
        "100",
        "--congruence-pmax",
        "100",
        "--format",
        "json",
    ]);
    let results: Vec<CriterionResult> = round_trip(&o);
    assert_eq!(results.len(), 9);
    let all = results.iter().all(|r| r.pass);
    assert_eq!(o.status.code(), Some(if all { 0 } else { 1 }));

    let o = run(&["verify-all", "--pmax", "100", "--congruence-pmax", "100"]);
    let text = stdout(&o);
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]"))
            .count(),
        9
    );
    assert!(text.trim_end().ends_with("criteria passed"));
}
