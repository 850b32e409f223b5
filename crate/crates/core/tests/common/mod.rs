use std::process::Command;

/// Value reported by `scripts/sdpa_crosscheck.py`, or `None` when python3 with
/// cvxpy is not installed.
pub fn external_value(sdpa: &str, tag: &str) -> Option<f64> {
    let script = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scripts/sdpa_crosscheck.py");
    let probe = Command::new("python3").args(["-c", "import cvxpy"]).output().ok()?;
    if !probe.status.success() {
        return None;
    }
    let path = std::env::temp_dir().join(format!("kpoint-{tag}-{}.dat-s", std::process::id()));
    std::fs::write(&path, sdpa).ok()?;
    let out = Command::new("python3").arg(script).arg(&path).output().ok()?;
    let _ = std::fs::remove_file(&path);
    String::from_utf8_lossy(&out.stdout).trim().parse().ok()
}
