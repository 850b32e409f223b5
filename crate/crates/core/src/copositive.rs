//! Copositivity certificates: the kernel `F`, the interior point `Z₀`, and
//! membership in the inner cones `C_r = {Z : T_r Z ≥ 0}`.

use kpoint_conic::{solve_conic, BlockKind, BlockSparse, ConicProgram, Constraint, Sense, SolverOptions, Status};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::family::{symmetric_pair, Multisets, Tuples};
use crate::graph::Graph;
use crate::operators::multiset_pair_coefficients;
use crate::report::{Check, Report};
use crate::scalar::psd_check;

/// Exact mode rounds inputs to multiples of `1 / EXACT_DENOMINATOR`.
pub const EXACT_DENOMINATOR: i64 = 1_000_000;

pub const DEFAULT_THETA: f64 = 0.25;
pub const DEFAULT_RCAP: usize = 6;

/// Positive semidefinite `F` with `F(x,y) ≤ -1` on non-edges, of minimum trace
/// subject to `F ⪰ margin · I`. A positive margin keeps `F` off the boundary of
/// the PSD cone, which is what lets `Z₀` land in a low cone `C_r`.
pub fn find_f(g: &Graph, margin: f64, opts: &SolverOptions) -> Result<(Vec<Vec<f64>>, Report)> {
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(CoreError::InvalidParameter(format!("margin {margin} must be finite and nonnegative")));
    }
    let n = g.n();
    let non_edges = g.non_edges();
    let mut f = vec![vec![0.0; n]; n];
    if !non_edges.is_empty() {
        // X = F - margin I ⪰ 0, X(x,y) + s_xy = -1, s ≥ 0, minimize tr X.
        let mut obj = BlockSparse::new();
        for i in 0..n {
            obj.add(0, i, i, 1.0);
        }
        let cons = non_edges
            .iter()
            .enumerate()
            .map(|(e, &(x, y))| Constraint::new(BlockSparse::new().with(0, x, y, 0.5).with(1, e, e, 1.0), -1.0))
            .collect();
        let p = ConicProgram::new(
            vec![BlockKind::Psd(n), BlockKind::Diagonal(non_edges.len())],
            Sense::Minimize,
            obj,
            cons,
        )?;
        let s = solve_conic(&p, opts)?;
        if s.status != Status::Optimal {
            return Err(CoreError::Solver(format!("kernel program: {:?}", s.status)));
        }
        for (i, row) in f.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = 0.5 * (s.x[0].get(i, j) + s.x[0].get(j, i));
            }
        }
    }
    for (i, row) in f.iter_mut().enumerate() {
        row[i] += margin;
    }
    let report = check_f(g, &f);
    Ok((f, report))
}

/// `F ⪰ 0` up to `1e-7 (1 + ‖F‖)` and `F ≤ -1 + 1e-6` on non-edges.
pub fn check_f(g: &Graph, f: &[Vec<f64>]) -> Report {
    let mut report = Report::default();
    let (min_eig, threshold, pass) = psd_check(f, &1e-7);
    report.push(Check { pass, ..Check::ge("f_psd", min_eig, threshold, 0.0) });
    if let Some(max) = g.non_edges().iter().map(|&(x, y)| f[x][y]).reduce(f64::max) {
        report.push(Check::le("f_non_edges", max, -1.0, 1e-6));
    }
    report
}

/// `Z₀ = θJ + (1-θ) 2F`. Needs `0 < θ ≤ 1/3` so that `Z₀ ≤ 3θ - 2 ≤ -1` on non-edges.
pub fn build_z0(g: &Graph, f: &[Vec<f64>], theta: f64) -> Result<(Vec<Vec<f64>>, Report)> {
    if !(theta > 0.0 && theta <= 1.0 / 3.0) {
        return Err(CoreError::InvalidParameter(format!("theta = {theta} must lie in (0, 1/3]")));
    }
    let z0: Vec<Vec<f64>> = f.iter().map(|row| row.iter().map(|&v| theta + (1.0 - theta) * 2.0 * v).collect()).collect();
    let mut report = Report::default();
    for &(x, y) in &g.non_edges() {
        // Bound in terms of F: 3θ - 2 + 2(1-θ)(F + 1).
        let predicted = 3.0 * theta - 2.0 + 2.0 * (1.0 - theta) * (f[x][y] + 1.0);
        report.push(Check::le(format!("z0[{x},{y}]_formula"), z0[x][y], predicted, 1e-12));
        report.push(Check::le(format!("z0[{x},{y}]"), z0[x][y], -1.0, 1e-6));
    }
    Ok((z0, report))
}

/// `λ₀ = max_x Z₀(x,x) + 1`, the smallest `λ` pairing with `Z₀`.
pub fn lambda_for(z: &[Vec<f64>]) -> f64 {
    (0..z.len()).map(|i| z[i][i]).fold(f64::NEG_INFINITY, f64::max) + 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMode {
    /// Integer arithmetic on `Z` rounded to multiples of `1/EXACT_DENOMINATOR`.
    Exact,
    /// Floating point, members up to a tolerance.
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    NonMember,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CopositivityCertificate {
    pub r: usize,
    pub mode: CertMode,
    pub verdict: Verdict,
    /// Lexicographically first multiset attaining the smallest sum.
    pub worst_multiset: Vec<usize>,
    pub worst_sum: f64,
    /// Exact smallest sum as `num/den` (exact mode).
    pub exact_sum: Option<String>,
}

fn check_symmetric(z: &[Vec<f64>]) -> Result<()> {
    let n = z.len();
    if n == 0 || z.iter().any(|row| row.len() != n) {
        return Err(CoreError::Mismatch("Z must be a nonempty square matrix".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if z[i][j] != z[j][i] || !z[i][j].is_finite() {
                return Err(CoreError::Mismatch(format!("Z is not symmetric and finite at ({i},{j})")));
            }
        }
    }
    Ok(())
}

/// `Z` scaled by `EXACT_DENOMINATOR` and rounded to integers.
pub fn rationalize(z: &[Vec<f64>]) -> Vec<Vec<i128>> {
    z.iter().map(|row| row.iter().map(|&v| (v * EXACT_DENOMINATOR as f64).round() as i128).collect()).collect()
}

fn exact_text(v: i128) -> String {
    let q = BigRational::new(BigInt::from(v), BigInt::from(EXACT_DENOMINATOR));
    format!("{}/{}", q.numer(), q.denom())
}

/// Checks `Σ_v m_v(m_v-1) Z(v,v) + Σ_{v≠w} m_v m_w Z(v,w) ≥ 0` for every
/// multiset `m` of size `r + 2`.
pub fn cr_membership(z: &[Vec<f64>], r: usize, mode: CertMode, tol: f64) -> Result<CopositivityCertificate> {
    check_symmetric(z)?;
    let n = z.len();
    let ms = Multisets::new(n, r + 2)?;
    let zi = rationalize(z);
    let mut worst: Option<(f64, i128, usize)> = None;
    for (idx, m) in ms.iter().enumerate() {
        let coefs = multiset_pair_coefficients(n, m);
        let (fs, is) = coefs.iter().fold((0.0, 0i128), |(fs, is), &(p, c)| {
            let (a, b) = symmetric_pair(n, p);
            (fs + c as f64 * z[a][b], is + c as i128 * zi[a][b])
        });
        let better = match (&worst, mode) {
            (None, _) => true,
            (Some(w), CertMode::Exact) => is < w.1,
            (Some(w), CertMode::Float) => fs < w.0,
        };
        if better {
            worst = Some((fs, is, idx));
        }
    }
    let (fs, is, idx) = worst.expect("nonempty");
    let (verdict, worst_sum, exact_sum) = match mode {
        CertMode::Exact => {
            (if is >= 0 { Verdict::Member } else { Verdict::NonMember }, is as f64 / EXACT_DENOMINATOR as f64, Some(exact_text(is)))
        }
        CertMode::Float => (if fs >= -tol { Verdict::Member } else { Verdict::NonMember }, fs, None),
    };
    Ok(CopositivityCertificate { r, mode, verdict, worst_multiset: ms.get(idx).to_vec(), worst_sum, exact_sum })
}

/// Re-evaluates one multiset sum, as a check on a reported violation.
pub fn multiset_sum(z: &[Vec<f64>], m: &[usize], mode: CertMode) -> f64 {
    let n = z.len();
    let zi = rationalize(z);
    let coefs = multiset_pair_coefficients(n, m);
    match mode {
        CertMode::Exact => {
            let s: i128 = coefs.iter().map(|&(p, c)| {
                let (a, b) = symmetric_pair(n, p);
                c as i128 * zi[a][b]
            }).sum();
            s as f64 / EXACT_DENOMINATOR as f64
        }
        CertMode::Float => coefs.iter().map(|&(p, c)| {
            let (a, b) = symmetric_pair(n, p);
            c as f64 * z[a][b]
        }).sum(),
    }
}

/// Smallest `Σ_{i≠j} Z(x_i, x_j)` over all tuples `x ∈ V^{r+2}`, enumerated
/// directly; membership holds iff it is nonnegative (exact mode) or
/// `≥ -tol` (float mode).
pub fn revalidate_by_tuples(z: &[Vec<f64>], r: usize, mode: CertMode, tol: f64) -> Result<(f64, bool)> {
    check_symmetric(z)?;
    let n = z.len();
    let tuples = Tuples::new(n, r + 2)?;
    let zi = rationalize(z);
    let mut min_f = f64::INFINITY;
    let mut min_i = i128::MAX;
    for i in 0..tuples.len() {
        let x = tuples.get(i);
        let mut fs = 0.0;
        let mut is = 0i128;
        for a in 0..x.len() {
            for b in 0..x.len() {
                if a != b {
                    fs += z[x[a]][x[b]];
                    is += zi[x[a]][x[b]];
                }
            }
        }
        min_f = min_f.min(fs);
        min_i = min_i.min(is);
    }
    Ok(match mode {
        CertMode::Exact => (min_i as f64 / EXACT_DENOMINATOR as f64, min_i >= 0),
        CertMode::Float => (min_f, min_f >= -tol),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinLevel {
    /// Smallest member level up to the cap; `None` means not found within it.
    pub level: Option<usize>,
    pub rcap: usize,
    pub certificates: Vec<CopositivityCertificate>,
    /// Membership at `level + 1`, as the cone chain requires.
    pub next_level_member: Option<bool>,
}

pub fn min_r(z: &[Vec<f64>], rcap: usize, mode: CertMode, tol: f64) -> Result<MinLevel> {
    let mut certificates = Vec::new();
    for r in 0..=rcap {
        let c = cr_membership(z, r, mode, tol)?;
        let member = c.verdict == Verdict::Member;
        certificates.push(c);
        if member {
            let next = cr_membership(z, r + 1, mode, tol)?.verdict == Verdict::Member;
            return Ok(MinLevel { level: Some(r), rcap, certificates, next_level_member: Some(next) });
        }
    }
    Ok(MinLevel { level: None, rcap, certificates, next_level_member: None })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbReport {
    pub epsilon: f64,
    /// `ελ₀ + (1-ε)λ`.
    pub lambda: f64,
    pub w: Vec<Vec<f64>>,
    pub min_level: MinLevel,
    pub checks: Report,
}

/// `W = εZ₀ + (1-ε)Z`, its constraint checks, and its smallest cone level.
#[allow(clippy::too_many_arguments)]
pub fn perturb_certify(
    g: &Graph,
    z: &[Vec<f64>],
    lambda: f64,
    z0: &[Vec<f64>],
    lambda0: f64,
    epsilon: f64,
    rcap: usize,
    mode: CertMode,
    tol: f64,
) -> Result<PerturbReport> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(CoreError::InvalidParameter(format!("epsilon = {epsilon} must lie in [0, 1]")));
    }
    check_symmetric(z)?;
    check_symmetric(z0)?;
    if z.len() != g.n() || z0.len() != g.n() {
        return Err(CoreError::Mismatch("matrix size differs from vertex count".into()));
    }
    let w: Vec<Vec<f64>> = z
        .iter()
        .zip(z0)
        .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| epsilon * y + (1.0 - epsilon) * x).collect())
        .collect();
    let lam = epsilon * lambda0 + (1.0 - epsilon) * lambda;
    let mut checks = Report::default();
    if let Some(max) = g.non_edges().iter().map(|&(x, y)| w[x][y]).reduce(f64::max) {
        checks.push(Check::le("w_non_edges", max, -1.0, tol));
    }
    checks.push(Check::le("w_diagonal", lambda_for(&w) - 1.0, lam - 1.0, tol));
    let min_level = min_r(&w, rcap, mode, tol)?;
    Ok(PerturbReport { epsilon, lambda: lam, w, min_level, checks })
}

/// `yᵀZy`.
pub fn quadratic_form(z: &[Vec<f64>], y: &[f64]) -> f64 {
    z.iter().zip(y).map(|(row, &yi)| yi * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>()).sum()
}
