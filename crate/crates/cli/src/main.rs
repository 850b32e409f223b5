mod args;
mod commands;

use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Parser;
use kpoint_conic::ConicError;
use kpoint_core::graph::from_spec;
use kpoint_core::{CoreError, Report};
use serde_json::{json, Value};

use args::{Cli, Command};
use commands::Outcome;

/// Bumped whenever a field of the report changes meaning or disappears.
const SCHEMA_VERSION: u32 = 1;

const EXIT_FAILED_CHECKS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::Solver(_) | CoreError::Degenerate(_) => EXIT_SOLVER,
        CoreError::Conic(ConicError::TooLarge(_)) => EXIT_USAGE,
        CoreError::Conic(_) => EXIT_SOLVER,
        _ => EXIT_USAGE,
    }
}

fn error_kind(e: &CoreError) -> &'static str {
    match exit_code(e) {
        EXIT_SOLVER => "solver",
        _ => "usage",
    }
}

fn run(cmd: &Command) -> (Option<Value>, Result<Outcome, CoreError>) {
    let spec = match cmd {
        Command::Alpha(a) => Some(&a.graph.graph),
        Command::Delta(a) => Some(&a.graph.graph),
        Command::XiDual(a) | Command::XiPrimal(a) => Some(&a.graph.graph),
        Command::Sweep(a) => Some(&a.graph.graph),
        Command::TransferVerify(a) => Some(&a.graph.graph),
        Command::Certify(a) => Some(&a.graph.graph),
        Command::ExportSdpa(a) => Some(&a.graph.graph),
        Command::Selftest(_) => None,
    };
    let g = match spec.map(|s| from_spec(s)) {
        Some(Ok(g)) => Some(g),
        Some(Err(e)) => return (None, Err(e)),
        None => None,
    };
    let info = g.as_ref().map(|g| json!({ "spec": spec, "n": g.n(), "edges": g.num_edges() }));
    let outcome = match (cmd, g.as_ref()) {
        (Command::Alpha(_), Some(g)) => commands::alpha(g),
        (Command::Delta(a), Some(g)) => commands::delta(g, a),
        (Command::XiDual(a), Some(g)) => commands::xi_dual(g, a),
        (Command::XiPrimal(a), Some(g)) => commands::xi_primal(g, a),
        (Command::Sweep(a), Some(g)) => commands::sweep(g, a),
        (Command::TransferVerify(a), Some(g)) => commands::transfer_verify(g, a),
        (Command::Certify(a), Some(g)) => commands::certify(g, a),
        (Command::ExportSdpa(a), Some(g)) => commands::export(g, a),
        (Command::Selftest(a), _) => commands::selftest(a),
        _ => unreachable!("every graph command has a graph"),
    };
    (info, outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let (graph, outcome) = run(&cli.command);
    let elapsed = clock.elapsed().as_secs_f64();

    let (result, checks, timings, error, code) = match outcome {
        Ok(o) => {
            let code = if o.checks.pass { 0 } else { EXIT_FAILED_CHECKS };
            (o.result, o.checks, o.timings, Value::Null, code)
        }
        Err(e) => {
            eprintln!("kpoint {}: {e}", cli.command.name());
            let err = json!({ "kind": error_kind(&e), "message": e.to_string() });
            (Value::Null, Report::new(Vec::new()), Default::default(), err, exit_code(&e))
        }
    };
    for c in checks.failed() {
        eprintln!("check failed: {} (lhs {}, rhs {}, slack {})", c.name, c.lhs, c.rhs, c.slack);
    }
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": { "name": "kpoint", "version": env!("CARGO_PKG_VERSION") },
        "command": cli.command.name(),
        "config": serde_json::to_value(&cli.command).expect("config serializes"),
        "graph": graph,
        "result": result,
        "checks": checks.checks,
        "pass": code == 0,
        "error": error,
        "run": { "started_unix": started, "elapsed_seconds": elapsed, "timings": timings },
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let target = &cli.command.common().report;
    if target == "-" {
        print!("{text}");
    } else if let Err(e) = std::fs::write(target, &text) {
        eprintln!("kpoint: cannot write report to {target}: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}
