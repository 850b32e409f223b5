use std::collections::BTreeMap;
use std::time::Instant;

use kpoint_conic::sdpa::{export_sdpa, import_sdpa};
use kpoint_conic::{ResidualReport, SolverOptions, Status};
use kpoint_core::copositive::{
    build_z0, check_f, find_f, min_r, revalidate_by_tuples, CertMode, DEFAULT_RCAP, DEFAULT_THETA,
};
use kpoint_core::graph::{alpha_brute_force, alpha_exact, cycle, gnp, max_independent_set, petersen, Graph};
use kpoint_core::hierarchies::{
    build_delta, build_xi_dual, build_xi_primal, evaluate_cell, hierarchy_sweep, assemble_sweep, solve_delta,
    solve_xi_dual, solve_xi_primal, sweep_cells, to_f64_matrix, DeltaForm, LpMode, SweepCell, SweepOptions, XiForm,
};
use kpoint_core::identities::{all_graphs, dirac_suite, operator_identity_suite};
use kpoint_core::scalar::Scalar;
use kpoint_core::transfer::{dirac_transfer, transfer_report, TransferResult};
use kpoint_core::{Check, CoreError, Report, Result};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::*;

/// What a command produced: its result body, the checks it ran, and
/// wall-clock timings kept apart from everything deterministic.
pub struct Outcome {
    pub result: Value,
    pub checks: Report,
    pub timings: BTreeMap<String, f64>,
}

impl Outcome {
    fn new(result: Value, checks: Report) -> Outcome {
        Outcome { result, checks, timings: BTreeMap::new() }
    }
}

pub fn solver_options(c: &Common) -> SolverOptions {
    SolverOptions { tolerance: c.solver_tol, max_iterations: c.max_iterations, ..SolverOptions::default() }
}

fn form(f: FormArg) -> XiForm {
    match f {
        FormArg::Multiset => XiForm::Multiset,
        FormArg::Tuple => XiForm::Tuple,
    }
}

fn lp_mode(m: ModeArg) -> LpMode {
    match m {
        ModeArg::Exact => LpMode::Exact,
        ModeArg::Float => LpMode::Float,
    }
}

fn cert_mode(m: ModeArg) -> CertMode {
    match m {
        ModeArg::Exact => CertMode::Exact,
        ModeArg::Float => CertMode::Float,
    }
}

/// JSON number, or `"inf"`/`"-inf"`/`"nan"` where JSON has none.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn residual_checks(r: &ResidualReport) -> Report {
    Report::new(r.checks.iter().map(|c| Check::le(format!("residual.{}", c.name), c.violation, c.limit, 0.0)).collect())
}

fn require_optimal(status: Status, what: &str) -> Result<()> {
    if status == Status::Optimal {
        Ok(())
    } else {
        Err(CoreError::Solver(format!("{what}: solver stopped with status {status:?}")))
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn alpha(g: &Graph) -> Result<Outcome> {
    let set = max_independent_set(g);
    let mut checks = Report::default();
    checks.push(Check::ge("set_independent", g.is_independent(set) as u8 as f64, 1.0, 0.0));
    if g.n() <= 20 {
        checks.push(Check::eq("brute_force", set.len() as f64, alpha_brute_force(g)? as f64, 0.0));
    }
    Ok(Outcome::new(json!({ "alpha": set.len(), "set": set.to_vec() }), checks))
}

pub fn delta(g: &Graph, a: &DeltaArgs) -> Result<Outcome> {
    let b = solve_delta(g, a.k, &solver_options(&a.common), a.common.tol)?;
    require_optimal(b.status, "delta")?;
    let mut checks = b.verification.clone();
    checks.extend(residual_checks(&b.residuals));
    let mut result = json!({
        "k": a.k,
        "value": num(b.value),
        "status": format!("{:?}", b.status),
        "iterations": b.iterations,
    });
    if a.witness {
        result["witness"] = to_value(&b.witness);
    }
    Ok(Outcome::new(result, checks))
}

pub fn xi_dual(g: &Graph, a: &XiArgs) -> Result<Outcome> {
    let d = solve_xi_dual(g, a.r, form(a.form), lp_mode(a.mode), &solver_options(&a.common), a.common.tol)?;
    let checks = d.verification.clone();
    Ok(Outcome::new(to_value(&d), checks))
}

pub fn xi_primal(g: &Graph, a: &XiArgs) -> Result<Outcome> {
    let p = solve_xi_primal(g, a.r, form(a.form), lp_mode(a.mode), &solver_options(&a.common), a.common.tol)?;
    let checks = p.verification.clone();
    Ok(Outcome::new(to_value(&p), checks))
}

fn cell_label(c: SweepCell) -> (&'static str, usize) {
    match c {
        SweepCell::Delta(k) => ("delta", k),
        SweepCell::XiDual(r) => ("xi_dual", r),
        SweepCell::XiPrimal(r) => ("xi_primal", r),
    }
}

pub fn sweep(g: &Graph, a: &SweepArgs) -> Result<Outcome> {
    if a.kmax < 2 {
        return Err(CoreError::InvalidParameter("kmax must be at least 2".into()));
    }
    let opts = SweepOptions {
        solver: solver_options(&a.common),
        mode: lp_mode(a.mode),
        residual_tol: a.common.tol,
        sandwich_tol: a.sandwich_tol,
        monotone_tol: a.monotone_tol,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| CoreError::InvalidParameter(format!("thread pool: {e}")))?;
    let cells = sweep_cells(a.kmax, a.rmax);
    let solved: Vec<Result<(_, f64)>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&c| {
                let start = Instant::now();
                evaluate_cell(g, c, &opts).map(|r| (r, start.elapsed().as_secs_f64()))
            })
            .collect()
    });
    let mut timings = BTreeMap::new();
    let mut results = Vec::with_capacity(solved.len());
    for s in solved {
        let (r, secs) = s?;
        let (q, i) = cell_label(r.cell);
        timings.insert(format!("{q}[{i}]"), secs);
        results.push(r);
    }
    let table = assemble_sweep(g, results, &opts);
    if let Some(path) = &a.csv {
        let io = |e: csv::Error| CoreError::Io { path: path.display().to_string(), source: e.into() };
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        w.write_record(["graph", "quantity", "index", "value", "status", "checks_pass"]).map_err(io)?;
        for c in &table.cells {
            let (q, i) = cell_label(c.cell);
            let value = if c.value.is_finite() { format!("{}", c.value) } else { num(c.value).as_str().unwrap_or("nan").to_string() };
            w.write_record([a.graph.graph.as_str(), q, &i.to_string(), &value, &c.status, &c.checks_pass.to_string()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| CoreError::Io { path: path.display().to_string(), source: e })?;
    }
    let rows: Vec<Value> = table
        .cells
        .iter()
        .map(|c| {
            let (q, i) = cell_label(c.cell);
            json!({ "quantity": q, "index": i, "value": num(c.value), "status": c.status, "checks_pass": c.checks_pass })
        })
        .collect();
    let checks = table.checks.clone();
    Ok(Outcome { result: json!({ "alpha": table.alpha, "rows": rows }), checks, timings })
}

fn transfer_body<T: Scalar>(res: &TransferResult<T>) -> Value {
    let alpha = to_f64_matrix(&res.alpha);
    let total: f64 = alpha.iter().flatten().sum();
    json!({
        "r": res.r,
        "alpha_total": num(total),
        "phi": res.phi.iter().map(|v| num(v.to_f64())).collect::<Vec<_>>(),
        "alpha": alpha,
        "beta": res.beta.values.iter().map(|v| num(v.to_f64())).collect::<Vec<_>>(),
    })
}

pub fn transfer_verify(g: &Graph, a: &TransferArgs) -> Result<Outcome> {
    if a.dirac {
        let set = max_independent_set(g);
        let (res, checks) = dirac_transfer::<BigRational>(g, set, a.r)?;
        let mut body = transfer_body(&res);
        body["source"] = json!({ "dirac": set.to_vec() });
        body["phi_exact"] = json!(res.phi.iter().map(|v| v.to_string()).collect::<Vec<_>>());
        return Ok(Outcome::new(body, checks));
    }
    let d = solve_delta(g, a.r + 2, &solver_options(&a.common), a.common.tol)?;
    require_optimal(d.status, "delta")?;
    let mut checks = d.verification.clone();
    let (res, rep) = transfer_report(g, &d.witness, a.r, &a.common.tol)?;
    checks.extend(rep);
    let mut body = transfer_body(&res);
    body["source"] = json!({ "delta": { "k": a.r + 2, "value": num(d.value) } });
    Ok(Outcome::new(body, checks))
}

fn read_matrix(path: &std::path::Path) -> Result<Vec<Vec<f64>>> {
    let io = |source| CoreError::Io { path: path.display().to_string(), source };
    let text = std::fs::read_to_string(path).map_err(io)?;
    serde_json::from_str(&text).map_err(|e| CoreError::Parse { line: e.line(), msg: e.to_string() })
}

pub fn certify(g: &Graph, a: &CertifyArgs) -> Result<Outcome> {
    let mode = cert_mode(a.mode);
    let tol = a.common.tol;
    let mut checks = Report::default();
    let mut body = json!({});
    let z = match &a.matrix {
        Some(path) => read_matrix(path)?,
        None => {
            let (f, frep) = find_f(g, a.margin, &solver_options(&a.common))?;
            checks.extend(frep);
            checks.extend(check_f(g, &f));
            let (z0, zrep) = build_z0(g, &f, a.theta)?;
            checks.extend(zrep);
            body["f"] = json!(f);
            body["z0"] = json!(z0);
            z0
        }
    };
    let level = min_r(&z, a.rcap, mode, tol)?;
    if let Some(r) = level.level {
        let (min, ok) = revalidate_by_tuples(&z, r, mode, tol)?;
        checks.push(Check::ge(format!("tuple_revalidation[{r}]"), ok as u8 as f64, 1.0, 0.0));
        body["tuple_minimum"] = num(min);
    }
    body["min_level"] = to_value(&level);
    Ok(Outcome::new(body, checks))
}

pub fn export(g: &Graph, a: &ExportArgs) -> Result<Outcome> {
    let program = match a.program {
        ProgramArg::Delta => build_delta(g, a.level, DeltaForm::Reduced)?.program,
        ProgramArg::DeltaFull => build_delta(g, a.level, DeltaForm::Full)?.program,
        ProgramArg::XiDual => build_xi_dual(g, a.level, form(a.form))?,
        ProgramArg::XiPrimal => build_xi_primal(g, a.level, form(a.form))?,
    };
    let text = export_sdpa(&program);
    std::fs::write(&a.out, &text).map_err(|source| CoreError::Io { path: a.out.display().to_string(), source })?;
    let back = import_sdpa(&text)?;
    let mut checks = Report::default();
    checks.push(Check::ge("round_trip", (back == program && export_sdpa(&back) == text) as u8 as f64, 1.0, 0.0));
    let body = json!({
        "path": a.out.display().to_string(),
        "constraints": program.num_constraints(),
        "blocks": program.blocks().iter().map(|b| format!("{b:?}")).collect::<Vec<_>>(),
        "bytes": text.len(),
    });
    Ok(Outcome::new(body, checks))
}

fn prefixed(prefix: &str, r: Report) -> Report {
    Report::new(r.checks.into_iter().map(|mut c| {
        c.name = format!("{prefix}.{}", c.name);
        c
    }).collect())
}

pub fn selftest(a: &SelftestArgs) -> Result<Outcome> {
    let opts = solver_options(&a.common);
    let tol = a.common.tol;
    let mut checks = Report::default();
    let mut timings = BTreeMap::new();
    let mut stage = |name: &str, f: &mut dyn FnMut() -> Result<Report>| -> Result<()> {
        let start = Instant::now();
        let r = f()?;
        timings.insert(name.to_string(), start.elapsed().as_secs_f64());
        checks.extend(prefixed(name, r));
        Ok(())
    };
    stage("identities", &mut || operator_identity_suite(4, 3))?;
    stage("dirac", &mut || {
        let mut graphs: Vec<Graph> = (1..=4).flat_map(all_graphs).collect();
        graphs.push(cycle(5)?);
        dirac_suite(&graphs, 4, 3)
    })?;
    stage("delta", &mut || {
        let mut r = Report::default();
        let c5 = cycle(5)?;
        r.push(Check::eq("c5_k2", solve_delta(&c5, 2, &opts, tol)?.value, 5f64.sqrt(), 1e-4));
        r.push(Check::eq("c5_k4", solve_delta(&c5, 4, &opts, tol)?.value, 2.0, 1e-4));
        r.push(Check::eq("petersen_k2", solve_delta(&petersen(), 2, &opts, tol)?.value, 4.0, 1e-3));
        Ok(r)
    })?;
    stage("xi", &mut || {
        let mut r = Report::default();
        let c5 = cycle(5)?;
        for (k, expect) in [f64::INFINITY, 3.0, 3.0, 2.5].into_iter().enumerate() {
            let d = solve_xi_dual(&c5, k, XiForm::Multiset, LpMode::Exact, &opts, tol)?;
            r.push(Check::eq(format!("c5_dual[{k}]"), d.value, expect, 0.0));
            let p = solve_xi_primal(&c5, k, XiForm::Multiset, LpMode::Exact, &opts, tol)?;
            r.push(Check::eq(format!("c5_primal[{k}]"), p.value, expect, 0.0));
        }
        Ok(r)
    })?;
    stage("random", &mut || {
        let mut r = Report::default();
        for i in 0..a.graphs {
            let seed = a.seed.wrapping_add(i as u64);
            let g = gnp(4 + (seed % 3) as usize, 0.5, seed)?;
            let al = alpha_exact(&g);
            let d = solve_delta(&g, al + 2, &opts, tol)?;
            r.push(Check::eq(format!("gnp[{seed}].convergence"), d.value, al as f64, 1e-3));
            let sweep = hierarchy_sweep(&g, 3, 1, &SweepOptions { solver: opts.clone(), ..SweepOptions::default() })?;
            r.extend(prefixed(&format!("gnp[{seed}]"), sweep.checks));
            let (_, t) = transfer_report(&g, &solve_delta(&g, 3, &opts, tol)?.witness, 1, &tol)?;
            r.extend(prefixed(&format!("gnp[{seed}].transfer"), t));
        }
        Ok(r)
    })?;
    stage("certify", &mut || {
        let g = cycle(5)?;
        let (f, mut r) = find_f(&g, 1.0, &opts)?;
        let (z0, zrep) = build_z0(&g, &f, DEFAULT_THETA)?;
        r.extend(zrep);
        let level = min_r(&z0, DEFAULT_RCAP, CertMode::Exact, 0.0)?;
        r.push(Check::eq("c5_level", level.level.map_or(f64::INFINITY, |l| l as f64), 4.0, 0.0));
        Ok(r)
    })?;
    let result = json!({ "seed": a.seed, "graphs": a.graphs, "checks_run": checks.checks.len() });
    Ok(Outcome { result, checks, timings })
}
