use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn kpoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpoint")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kpoint-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Everything except the wall-clock section.
fn stable(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("run");
    v
}

#[test]
fn delta_on_c5() {
    let out = kpoint(&["delta", "--graph", "cycle:5", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "delta");
    assert_eq!(r["graph"]["n"], 5);
    assert_eq!(r["config"]["k"], 2);
    assert_eq!(r["config"]["common"]["tol"], 1e-6);
    let v = r["result"]["value"].as_f64().unwrap();
    assert!((v - 2.23607).abs() < 1e-4, "{v}");
    assert_eq!(r["pass"], true);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn xi_dual_infinite_at_level_zero() {
    let out = kpoint(&["xi-dual", "--graph", "path:3", "--r", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["value"], "inf");
    assert_eq!(r["result"]["feasible"], false);
}

#[test]
fn xi_primal_on_c5() {
    let out = kpoint(&["xi-primal", "--graph", "cycle:5", "--r", "3", "--mode", "float"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out)["result"]["value"].as_f64().unwrap();
    assert!((v - 2.5).abs() < 1e-6, "{v}");
}

#[test]
fn transfer_verify_passes() {
    for extra in [&[][..], &["--dirac"][..]] {
        let mut args = vec!["transfer-verify", "--graph", "cycle:5", "--r", "1"];
        args.extend_from_slice(extra);
        let out = kpoint(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
        for n in ["beta_nonnegative", "alpha_nonnegative", "alpha_edges_zero", "alpha_diagonal_one", "alpha_total_vs_objective"] {
            assert!(names.contains(&n), "{n} missing");
        }
    }
}

#[test]
fn alpha_of_petersen() {
    let out = kpoint(&["alpha", "--graph", "petersen"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["alpha"], 4);
}

#[test]
fn sweep_is_deterministic_across_jobs() {
    let csv1 = scratch("a.csv");
    let csv2 = scratch("b.csv");
    let a = kpoint(&["sweep", "--graph", "gnp:6,0.5,3", "--jobs", "1", "--csv", csv1.to_str().unwrap()]);
    let b = kpoint(&["sweep", "--graph", "gnp:6,0.5,3", "--jobs", "3", "--csv", csv2.to_str().unwrap()]);
    let c = kpoint(&["sweep", "--graph", "gnp:6,0.5,3", "--jobs", "3", "--csv", csv2.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let (ra, rb, rc) = (stable(report(&a)), stable(report(&b)), stable(report(&c)));
    assert_eq!(ra["result"], rb["result"]);
    assert_eq!(ra["checks"], rb["checks"]);
    assert_eq!(serde_json::to_string(&rb).unwrap(), serde_json::to_string(&rc).unwrap());
    assert_eq!(std::fs::read(&csv1).unwrap(), std::fs::read(&csv2).unwrap());
    let text = std::fs::read_to_string(&csv1).unwrap();
    assert!(text.starts_with("graph,quantity,index,value,status,checks_pass\n"));
    assert_eq!(text.lines().count(), 1 + 3 + 3 + 3);
}

#[test]
fn report_file_and_exports() {
    let json = scratch("delta.json");
    let sdpa = scratch("c5.dat-s");
    let out = kpoint(&["export-sdpa", "--graph", "cycle:5", "--program", "xi-dual", "--level", "1", "--out", sdpa.to_str().unwrap(), "--report", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["pass"], true);
    let text = std::fs::read_to_string(&sdpa).unwrap();
    assert!(text.starts_with("* kpoint conic program; sense: maximize"));
}

#[test]
fn certify_pentagon_and_boundary_matrix() {
    let out = kpoint(&["certify", "--graph", "cycle:5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["min_level"]["level"], 4);
    let m = scratch("boundary.json");
    std::fs::write(&m, "[[1,-1],[-1,1]]").unwrap();
    let out = kpoint(&["certify", "--graph", "complete:2", "--matrix", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["min_level"]["level"], Value::Null);
    assert_eq!(r["result"]["min_level"]["certificates"][6]["verdict"], "non_member");
}

#[test]
fn exit_codes() {
    let usage = kpoint(&["delta", "--graph", "nonsense:1"]);
    assert_eq!(usage.status.code(), Some(2));
    let r = report(&usage);
    assert_eq!(r["error"]["kind"], "usage");
    assert_eq!(r["pass"], false);
    assert_eq!(kpoint(&["delta"]).status.code(), Some(2));
    assert_eq!(kpoint(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kpoint(&["--version"]).status.code(), Some(0));

    let failed = kpoint(&["sweep", "--graph", "cycle:5", "--kmax", "3", "--rmax", "1", "--sandwich-tol=-1"]);
    assert_eq!(failed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&failed.stderr).contains("check failed"));

    let solver = kpoint(&["delta", "--graph", "cycle:5", "--max-iterations", "1"]);
    assert_eq!(solver.status.code(), Some(3));
    assert_eq!(report(&solver)["error"]["kind"], "solver");
}

#[test]
fn selftest_passes() {
    let out = kpoint(&["selftest", "--graphs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(r["run"]["timings"]["identities"].is_number());
    assert!(r["result"]["checks_run"].as_u64().unwrap() > 1000);
}
