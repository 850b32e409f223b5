use serde::{Deserialize, Serialize};

use crate::error::ConicError;
use crate::program::{BlockKind, ConicProgram, Sense};
use crate::solution::{dual_slack, sparse_inner, BlockValue, Solution};

/// One recomputed residual. `violation` is the nonnegative amount by which the
/// raw `value` misses its requirement; the check passes when `violation <= limit`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualCheck {
    pub name: String,
    pub value: f64,
    pub violation: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub tolerance: f64,
    pub checks: Vec<ResidualCheck>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn failed(&self) -> impl Iterator<Item = &ResidualCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn push(checks: &mut Vec<ResidualCheck>, name: String, value: f64, violation: f64, limit: f64) {
    checks.push(ResidualCheck {
        name,
        value,
        violation,
        limit,
        pass: violation <= limit,
    });
}

/// Recomputes feasibility, cone membership, objective and duality residuals of
/// `s` against the data of `p`.
pub fn check_solution(p: &ConicProgram, s: &Solution, tol: f64) -> Result<ResidualReport, ConicError> {
    if s.x.len() != p.blocks().len() {
        return Err(ConicError::ShapeMismatch(format!(
            "{} primal blocks for {} program blocks",
            s.x.len(),
            p.blocks().len()
        )));
    }
    for (k, (blk, kind)) in s.x.iter().zip(p.blocks()).enumerate() {
        let ok = matches!(
            (blk, kind),
            (BlockValue::Dense(_), BlockKind::Psd(_)) | (BlockValue::Diagonal(_), BlockKind::Diagonal(_))
        ) && blk.dim() == kind.size();
        if !ok {
            return Err(ConicError::ShapeMismatch(format!("block {k} has the wrong kind or order")));
        }
    }
    if s.y.len() != p.num_constraints() {
        return Err(ConicError::ShapeMismatch(format!(
            "{} dual values for {} constraints",
            s.y.len(),
            p.num_constraints()
        )));
    }

    let mut checks = Vec::new();
    for (i, c) in p.constraints().iter().enumerate() {
        let r = sparse_inner(&c.coeffs, &s.x) - c.rhs;
        push(&mut checks, format!("constraint[{i}]"), r, r.abs(), tol * (1.0 + c.rhs.abs()));
    }
    for (k, blk) in s.x.iter().enumerate() {
        let lam = blk.min_eigenvalue();
        let lam = if lam.is_finite() { lam } else { 0.0 };
        push(
            &mut checks,
            format!("primal_cone[{k}]"),
            lam,
            (-lam).max(0.0),
            tol * (1.0 + blk.frobenius_norm()),
        );
    }
    let slack = dual_slack(p, &s.y);
    for (k, blk) in slack.iter().enumerate() {
        let lam = blk.min_eigenvalue();
        let lam = if lam.is_finite() { lam } else { 0.0 };
        push(
            &mut checks,
            format!("dual_cone[{k}]"),
            lam,
            (-lam).max(0.0),
            tol * (1.0 + blk.frobenius_norm()),
        );
    }
    let pobj = sparse_inner(p.objective(), &s.x);
    push(
        &mut checks,
        "objective".into(),
        pobj,
        (pobj - s.primal_objective).abs(),
        tol * (1.0 + pobj.abs()),
    );
    let dobj: f64 = p.rhs().iter().zip(&s.y).map(|(b, y)| b * y).sum();
    // Weak duality: the dual bounds the primal from the correct side.
    let gap = match p.sense() {
        Sense::Maximize => dobj - pobj,
        Sense::Minimize => pobj - dobj,
    };
    push(
        &mut checks,
        "weak_duality".into(),
        gap,
        (-gap).max(0.0),
        tol * (1.0 + pobj.abs() + dobj.abs()),
    );
    let pass = checks.iter().all(|c| c.pass);
    Ok(ResidualReport { tolerance: tol, checks, pass })
}
