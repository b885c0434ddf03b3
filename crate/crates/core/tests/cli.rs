use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_shows_catalog() {
    let o = bench(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 13);
    for id in ["f1", "f6", "f10", "abs_sum"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id}");
    }
}

#[test]
fn describe_with_override() {
    let o = bench(&["describe", "f3", "--set", "a=2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[-12, 12]"), "{text}");
    assert!(text.contains("Union"), "{text}");
}

#[test]
fn eval_reports_value_and_feasibility() {
    let o = bench(&["eval", "f3", "--x", "1,0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("value 1\n"), "{text}");
    assert!(text.contains("feasible true"), "{text}");

    let o = bench(&["eval", "f1", "--x", "0,0,0,0,0", "--seed", "5", "--eval-index", "9"]);
    assert!(stdout(&o).contains("value -1\n"));
}

#[test]
fn run_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"problem": "abs_sum", "solver": "de", "trials": 2, "max_evals": 800}"#).unwrap();
    let o = bench(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "3",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    assert_eq!(v["records"][2]["evals"].as_u64().unwrap(), 800);
}

#[test]
fn csv_to_stdout() {
    let o = bench(&["run", "--problem", "f3", "--solver", "sa", "--trials", "2", "--set", "max_evals=500"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "problem,solver,seed,best_value,objective_gap,location_gap,feasible,evals,wall_ms,noise_policy"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["run", "--problem", "f99"][..],
        &["run", "--problem", "f3", "--solver", "cmaes"],
        &["run", "--problem", "f3", "--solver", "al+nm"],
        &["run", "--problem", "f3", "--format", "xml"],
        &["eval", "f3", "--x", "1,2,3"],
        &["describe", "f3", "--set", "zz=1"],
    ] {
        let o = bench(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verify_exits_nonzero_on_failed_check() {
    let o = bench(&["verify"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL f6 inner endpoint"));
    assert!(text.contains("PASS rk4 vs analytic"));
}
