use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn zoo(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "zoo", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freesumlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn delta_of_the_five_vertex_polytope() {
    let o = run(&["delta", &zoo("zero-one-five.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + λ + λ^2\n");
}

#[test]
fn check_reports_the_non_idp_free_sum() {
    let f = zoo("zero-one-five.txt");
    let o = run(&["--json", "check", &f, &f]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["actual_idp_free_sum"], Value::Bool(false));
    assert_eq!(v["predicted_idp_free_sum"], Value::Bool(false));
    assert_eq!(v["delta_multiplicative"], Value::Bool(false));
    assert_eq!(v["consistent"], Value::Bool(true));

    let skipped = json(&run(&["--json", "check", &f, &f, "--skip-actual"]));
    assert_eq!(skipped["actual_idp_free_sum"], Value::Null);
}

#[test]
fn json_output_round_trips() {
    let f = zoo("triangle213.txt");
    for args in [
        vec!["--json", "check", &f, &f],
        vec!["--json", "witness-sets", &f],
        vec!["--json", "hilbert", &f],
        vec!["--json", "ehrhart", &f],
        vec!["--json", "facets", &f],
        vec!["--json", "idp", &f],
    ] {
        let o = run(&args);
        let text = stdout(&o);
        let reserialized = serde_json::to_string_pretty(&json(&o)).unwrap() + "\n";
        assert_eq!(text, reserialized, "{args:?}");
    }
}

#[test]
fn witness_sets_of_the_triangle() {
    let f = zoo("triangle213.txt");
    let o = run(&["witness-sets", &f]);
    assert!(stdout(&o).contains("min = 2/3"), "{}", stdout(&o));
    let v = json(&run(&["--json", "witness-sets", &f]));
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["min_value"], Value::String("2/3".into()));
}

#[test]
fn free_sum_output_file_is_readable() {
    let dir = std::env::temp_dir().join(format!("freesumlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("fs.json");
    let f = zoo("zero-one-five.txt");
    let o = run(&["free-sum", &f, &f, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&run(&["--json", "idp", out.to_str().unwrap()]));
    assert_eq!(v["idp"], Value::Bool(false));
    assert_eq!(v["witness"]["level"], Value::from(3));
    assert_eq!(v["witness"]["point"], serde_json::json!([1, 1, 1, 1, 1, 1]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn points_and_quiet_mode() {
    let f = zoo("unit-square.txt");
    assert_eq!(stdout(&run(&["--quiet", "points", &f, "--dilate", "3"])), "16\n");
    assert_eq!(stdout(&run(&["--quiet", "ehrhart", &f])), "1 + 2n + n^2\n");
    assert_eq!(stdout(&run(&["--quiet", "idp", &f])), "true\n");
}

#[test]
fn examples_all_pass() {
    let o = run(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"), "{text}");
    assert!(text.contains("five-vertex-free-sum-not-idp"));
}

#[test]
fn fuzz_is_clean_and_deterministic() {
    let dir = std::env::temp_dir().join(format!("freesumlab-fuzz-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rep = dir.join("rep.json");
    let args = [
        "--json",
        "fuzz",
        "--seed",
        "1",
        "--dim-p",
        "2",
        "--dim-q",
        "2",
        "--coord-bound",
        "2",
        "--count",
        "50",
        "--reproducer",
        rep.to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["inconsistencies"], Value::from(0));
    assert_eq!(v["pairs"], Value::from(50));
    assert!(!rep.exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_and_precondition_errors_exit_1() {
    assert_eq!(run(&["fuzz", "--count", "0"]).status.code(), Some(1));
    assert_eq!(run(&["delta", "/nonexistent/file.txt"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["hilbert", &zoo("triangle213.txt"), "--cap", "2"]).status.code(), Some(1));

    let dir = std::env::temp_dir().join(format!("freesumlab-origin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let shifted = dir.join("shifted.txt");
    std::fs::write(&shifted, "1 1\n2 1\n1 2\n").unwrap();
    let o = run(&["free-sum", shifted.to_str().unwrap(), &zoo("segment2.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("origin"));
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn enumeration_cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_freesumlab"))
        .args(["points", &zoo("unit-square.txt"), "--dilate", "10"])
        .env("FREESUMLAB_MAX_POINTS", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}
