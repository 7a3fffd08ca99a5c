use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_selfconcord"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn selfconcord")
}

fn run_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("selfconcord-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn omega_and_alpha_on_inline_and_stdin_graphs() {
    let o = run(&["omega", "K4", "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["omega"], 4);

    let o = run_stdin(&["alpha", "-", "--format", "json"], "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n");
    assert_eq!(json(&o)["alpha"], 2);

    let o = run(&["omega", "4:1-2,2-3,1-3,3-4"]);
    assert_eq!(stdout(&o), "omega 3\nclique 1 2 3\n");
}

#[test]
fn reduce_k3_produces_the_reference_threshold() {
    let o = run(&["reduce", "K3", "--k", "3", "--sigma", "1/2"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["kind"], "cubic");
    assert_eq!(v["q"], "1/27");
    assert_eq!(v["gamma_power"], "1/54");
    assert_eq!(v["provenance"]["k"], 3);

    let o = run(&["reduce", "K3", "--k", "3", "--tau", "1"]);
    assert_eq!(json(&o)["q"], "1/4");
}

#[test]
fn reduce_then_check_round_trip_and_exit_codes() {
    let inst = stdout(&run(&["reduce", "K3", "--k", "3", "--sigma", "1/2"]));
    let path = temp_file("k3.json", &inst);
    let o = run(&["check-sc", path.to_str().unwrap(), "--mode", "oracle", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["status"], "NOT_SELF_CONCORDANT");
    assert_eq!(v["certificate"]["kind"], "witness");

    // no 4-clique in K3
    let o = run(&["check-sc", "K3", "--k", "4", "--mode", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("status: SELF_CONCORDANT\n"));

    // the same file through stdin
    let o = run_stdin(&["check-sc", "-", "--mode", "oracle"], &inst);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn second_order_check() {
    let o = run(&["check-sc2", "C5", "--k", "3", "--tau", "2", "--mode", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check-sc2", "K4", "--k", "3", "--mode", "oracle"]);
    assert_eq!(o.status.code(), Some(1));
    // relaxation on a loose instance gives up rather than guessing
    let o = run(&["check-sc2", "C5", "--k", "3", "--mode", "relax"]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)));
}

#[test]
fn bare_tensor_needs_parameters() {
    let t = temp_file("diag.txt", "symtensor 3 2\n1 1 1 1/1\n");
    let p = t.to_str().unwrap();
    // max A(h,h,h)^2 = 1, q = 4 sigma gamma^3
    let o = run(&["check-sc", p, "--sigma", "1", "--gamma-power", "1", "--mode", "grid"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["check-sc", p, "--sigma", "1/8", "--gamma-power", "1", "--mode", "relax"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["check-sc", p, "--sigma", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--gamma-power"));
}

#[test]
fn sigma_opt_brackets() {
    let zero = temp_file("zero.txt", "symtensor 3 3\n");
    let o = run(&["sigma-opt", zero.to_str().unwrap(), "--format", "json"]);
    let v = json(&o);
    assert_eq!((v["lower"].as_f64(), v["upper"].as_f64()), (Some(0.0), Some(0.0)));

    let diag = temp_file("one.txt", "symtensor 3 1\n1 1 1 1/1\n");
    let v = json(&run(&["sigma-opt", diag.to_str().unwrap(), "--format", "json"]));
    assert_eq!((v["lower"].as_f64(), v["upper"].as_f64()), (Some(0.25), Some(0.25)));
}

#[test]
fn footnote_demo_shows_the_mismatch() {
    let v = json(&run(&["footnote-demo", "--format", "json"]));
    assert_eq!(v["alpha"], 2);
    let f = |a: &str, b: &str| v[a][b].as_f64().unwrap();
    assert!((f("cited", "lhs") - 0.5f64.sqrt()).abs() < 1e-9);
    assert!((f("cited", "rhs") - 1.0).abs() < 1e-9);
    assert!((f("corrected", "lhs") - f("corrected", "rhs")).abs() < 1e-9);
}

#[test]
fn ms_and_nesterov_checks() {
    for g in ["E3", "C5", "K4", "5:1-2,2-3,3-1,4-5"] {
        assert!(run(&["ms-check", g]).status.success(), "{g}");
        assert!(run(&["nesterov-check", g]).status.success(), "{g}");
    }
    assert_eq!(run(&["ms-check", "K1"]).status.code(), Some(3));
    let v = json(&run(&["ms-check", "C5", "--format", "json"]));
    assert_eq!(v["omega"], 2);
    assert!(v["gap"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn output_is_deterministic() {
    let args = ["check-sc", "C5", "--k", "3", "--mode", "relax", "--format", "json", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn errors_exit_with_three() {
    assert_eq!(run(&["omega", "no-such-graph"]).status.code(), Some(3));
    assert_eq!(run(&["reduce", "K3", "--k", "2", "--sigma", "1/2"]).status.code(), Some(3));
    assert_eq!(run(&["reduce", "K3", "--k", "3"]).status.code(), Some(3));
    assert_eq!(run(&["check-sc", "K3"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let quartic = stdout(&run(&["reduce", "K3", "--k", "3", "--tau", "1"]));
    assert_eq!(run_stdin(&["check-sc", "-"], &quartic).status.code(), Some(3));
}

#[test]
fn verify_all_small_and_strict() {
    let o = run(&["verify-all", "--max-n", "4"]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 9, "{out}");

    let o = run(&["verify-all", "--max-n", "4", "--tol", "1e-15", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["passed"], false);
}
