//! The k-point bound `Δ_k` and the copositive bounds `ξ_r*`, `ξ_r` as conic
//! programs.
//!
//! `Δ_k` is the dual side of a minimization [`ConicProgram`]: the dual
//! variables are `ν(I)` for nonempty `I ∈ I_k`, and the dual slack holds `ν`
//! itself (diagonal block) and the slices `M_Q(S, T) = ν(S ∪ T ∪ Q)`.
//!
//! `ξ_r*` is likewise the dual side of a maximization LP whose dual
//! variables are `λ` and the upper triangle of `Z`; its primal side is then
//! the measure program `ξ_r`, which [`build_xi_primal`] also states directly.

use kpoint_conic::{
    check_solution, solve_conic, solve_lp_exact, BlockKind, BlockSparse, ConicProgram, Constraint, LpStatus,
    ResidualReport, Sense, SolverOptions, Status,
};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::family::{i1_set, independent_sets, symmetric_pair, symmetric_pair_index, Multisets, SetFamily, Space};
use crate::graph::{max_independent_set, Graph, VertexSet};
use crate::operators::{multiset_pair_coefficients, op_tr_tuples, PairColumns};
use crate::report::{Check, Relation, Report};
use crate::scalar::{psd_check, Scalar};

/// Values over an indexed family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureVector<T = f64> {
    pub space: Space,
    pub values: Vec<T>,
}

impl<T: Scalar> MeasureVector<T> {
    pub fn to_f64(&self) -> MeasureVector<f64> {
        MeasureVector { space: self.space, values: self.values.iter().map(Scalar::to_f64).collect() }
    }
}

/// Restriction of a measure on `I_k` to `I_j`, `j ≤ k`. Families are ordered by
/// cardinality, so this is a prefix.
pub fn restrict<T: Scalar>(g: &Graph, nu: &MeasureVector<T>, j: usize) -> Result<MeasureVector<T>> {
    let Space::IndependentSets { k, .. } = nu.space else {
        return Err(CoreError::Mismatch(format!("{:?} is not a family of independent sets", nu.space)));
    };
    if j > k {
        return Err(CoreError::InvalidParameter(format!("cannot restrict I_{k} to I_{j}")));
    }
    let fam = independent_sets(g, j)?;
    Ok(MeasureVector { space: fam.space(), values: nu.values[..fam.len()].to_vec() })
}

fn check_space(g: &Graph, nu_space: Space, k: usize, len: usize, fam: &SetFamily) -> Result<()> {
    if nu_space != (Space::IndependentSets { n: g.n(), k }) || len != fam.len() {
        return Err(CoreError::Mismatch(format!("measure over {nu_space:?} (length {len}) but I_{k} of the graph expected")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaForm {
    /// Slices indexed by all of `I_1`, as `B_k*ν` lays them out.
    Full,
    /// Slices keep only `∅` and the `{x}` with `Q + x` independent and `x ∉ Q`.
    /// The dropped rows are copies of row `∅` or zero, so positive
    /// semidefiniteness is unaffected, and the reduced slices admit strictly
    /// feasible points.
    Reduced,
}

#[derive(Clone, Debug)]
pub struct DeltaProgram {
    pub program: ConicProgram,
    /// `I_k`; dual variable `i` is `ν` at family index `i + 1`.
    pub family: SetFamily,
    /// `I_{k-2}`; PSD block `q` is the slice of base `q`.
    pub bases: SetFamily,
    /// `I_1` positions kept in each slice.
    pub slice_rows: Vec<Vec<usize>>,
    pub form: DeltaForm,
}

pub fn build_delta(g: &Graph, k: usize, form: DeltaForm) -> Result<DeltaProgram> {
    if k < 2 {
        return Err(CoreError::InvalidParameter(format!("k = {k} must be at least 2")));
    }
    let family = independent_sets(g, k)?;
    let bases = independent_sets(g, k - 2)?;
    let n = g.n();
    let slice_rows: Vec<Vec<usize>> = bases
        .sets()
        .iter()
        .map(|&q| match form {
            DeltaForm::Full => (0..=n).collect(),
            DeltaForm::Reduced => std::iter::once(0)
                .chain((0..n).filter(|&x| !q.contains(x) && g.is_independent(q.with(x))).map(|x| x + 1))
                .collect(),
        })
        .collect();

    let mut blocks: Vec<BlockKind> = slice_rows.iter().map(|r| BlockKind::Psd(r.len())).collect();
    let diag = blocks.len();
    blocks.push(BlockKind::Diagonal(family.len()));

    let mut objective = BlockSparse::new().with(diag, 0, 0, 1.0);
    let mut coeffs = vec![BlockSparse::new(); family.len()];
    for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
        c.add(diag, i, i, -1.0);
    }
    for (qi, (&q, rows)) in bases.sets().iter().zip(&slice_rows).enumerate() {
        for a in 0..rows.len() {
            for b in a..rows.len() {
                let union = i1_set(rows[a]).union(i1_set(rows[b])).union(q);
                match family.index_of(union) {
                    Some(0) => objective.add(qi, a, b, 1.0),
                    Some(idx) => coeffs[idx].add(qi, a, b, -1.0),
                    None => {}
                }
            }
        }
    }
    let constraints = coeffs
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| Constraint::new(a, if family.get(i).len() == 1 { 1.0 } else { 0.0 }))
        .collect();
    let program = ConicProgram::new(blocks, Sense::Minimize, objective, constraints)?;
    Ok(DeltaProgram { program, family, bases, slice_rows, form })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    #[serde(serialize_with = "crate::report::extended_f64::serialize")]
    pub value: f64,
    pub status: Status,
    pub witness: MeasureVector<f64>,
    pub residuals: ResidualReport,
    pub verification: Report,
    pub iterations: usize,
}

pub fn solve_delta(g: &Graph, k: usize, opts: &SolverOptions, tol: f64) -> Result<BoundResult> {
    let dp = build_delta(g, k, DeltaForm::Reduced)?;
    let sol = solve_conic(&dp.program, opts)?;
    let residuals = check_solution(&dp.program, &sol, tol)?;
    let mut values = Vec::with_capacity(dp.family.len());
    values.push(1.0);
    values.extend_from_slice(&sol.y);
    let witness = MeasureVector { space: dp.family.space(), values };
    let verification = verify_delta_feasible(g, k, &witness, &tol)?;
    Ok(BoundResult {
        value: sol.value(Sense::Minimize),
        status: sol.status,
        witness,
        residuals,
        verification,
        iterations: sol.iterations,
    })
}

/// `ν = Σ_{R ⊆ I, R ∈ I_k} δ_R`.
pub fn dirac_solution<T: Scalar>(g: &Graph, set: VertexSet, k: usize) -> Result<MeasureVector<T>> {
    if !set.is_subset(g.vertices()) || !g.is_independent(set) {
        return Err(CoreError::NotIndependent(set.to_string()));
    }
    let fam = independent_sets(g, k)?;
    let values = fam.sets().iter().map(|r| if r.is_subset(set) { T::one() } else { T::zero() }).collect();
    Ok(MeasureVector { space: fam.space(), values })
}

/// `ν(I_{=1})`.
pub fn singleton_mass<T: Scalar>(g: &Graph, nu: &MeasureVector<T>) -> T {
    let n = g.n().min(nu.values.len().saturating_sub(1));
    nu.values[1..=n].iter().fold(T::zero(), |acc, v| acc + v.clone())
}

/// The slice `(B_k*ν)(·, ·, Q)` over all of `I_1`.
pub fn full_slice<T: Scalar>(g: &Graph, fam: &SetFamily, nu: &[T], q: VertexSet) -> Vec<Vec<T>> {
    let n = g.n();
    let mut m = vec![vec![T::zero(); n + 1]; n + 1];
    for a in 0..=n {
        for b in a..=n {
            if let Some(idx) = fam.index_of(i1_set(a).union(i1_set(b)).union(q)) {
                m[a][b] = nu[idx].clone();
                m[b][a] = nu[idx].clone();
            }
        }
    }
    m
}

pub fn verify_delta_feasible<T: Scalar>(g: &Graph, k: usize, nu: &MeasureVector<T>, tol: &T) -> Result<Report> {
    if k < 2 {
        return Err(CoreError::InvalidParameter(format!("k = {k} must be at least 2")));
    }
    let fam = independent_sets(g, k)?;
    check_space(g, nu.space, k, nu.values.len(), &fam)?;
    let bases = independent_sets(g, k - 2)?;
    let mut report = Report::default();
    let min = nu.values.iter().cloned().fold(nu.values[0].clone(), |a, b| if b < a { b } else { a });
    report.push(Check::compare("nonnegative", &min, Relation::Ge, &T::zero(), tol));
    report.push(Check::compare("normalization", &nu.values[0], Relation::Eq, &T::one(), tol));
    for &q in bases.sets() {
        let slice = full_slice(g, &fam, &nu.values, q);
        let (min_eig, threshold, pass) = psd_check(&slice, tol);
        report.push(Check {
            name: format!("slice_psd[{q}]"),
            relation: Relation::Ge,
            lhs: min_eig,
            rhs: threshold,
            tolerance: tol.to_f64(),
            slack: min_eig - threshold,
            pass,
        });
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiForm {
    /// One cone row per multiset of size `r + 2`.
    Multiset,
    /// One cone row per tuple in `V^{r+2}`, taken from the tuple form of `T_r`.
    Tuple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpMode {
    /// Rational simplex.
    Exact,
    /// Interior-point method.
    Float,
}

/// Integer cone rows `Σ_{i≠j} Z(x_i, x_j) ≥ 0` over symmetric pairs.
fn cone_rows(n: usize, r: usize, form: XiForm) -> Result<Vec<Vec<(usize, i64)>>> {
    match form {
        XiForm::Multiset => Ok(Multisets::new(n, r + 2)?.iter().map(|m| multiset_pair_coefficients(n, m)).collect()),
        XiForm::Tuple => {
            let t = op_tr_tuples(n, r, PairColumns::Symmetric)?;
            let scale = BigRational::from_integer(((r + 2) * (r + 1)).into());
            Ok((0..t.nrows())
                .map(|row| {
                    t.row(row)
                        .iter()
                        .map(|(_, c, v)| {
                            let s = v * &scale;
                            assert!(s.is_integer());
                            (*c, i64::try_from(s.to_integer()).expect("small"))
                        })
                        .collect()
                })
                .collect())
        }
    }
}

/// `ξ_r*`: minimize `λ` over `Z ∈ Q_r` with `Z(x,x) ≤ λ - 1` and `Z(x,y) ≤ -1`
/// on non-edges, stated as the dual of a maximization LP. Dual variable 0 is
/// `λ`; dual variable `1 + p` is `Z` at symmetric pair `p`.
pub fn build_xi_dual(g: &Graph, r: usize, form: XiForm) -> Result<ConicProgram> {
    let n = g.n();
    let npairs = n * (n + 1) / 2;
    let non_edges = g.non_edges();
    let rows = cone_rows(n, r, form)?;
    let size = n + non_edges.len() + rows.len();
    let mut a = vec![BlockSparse::new(); npairs + 1];
    let mut c = BlockSparse::new();
    let mut row = 0;
    for x in 0..n {
        // λ - Z(x,x) - 1 ≥ 0
        a[0].add(0, row, row, 1.0);
        a[1 + symmetric_pair_index(n, x, x)].add(0, row, row, -1.0);
        c.add(0, row, row, 1.0);
        row += 1;
    }
    for &(x, y) in &non_edges {
        // -Z(x,y) - 1 ≥ 0
        a[1 + symmetric_pair_index(n, x, y)].add(0, row, row, -1.0);
        c.add(0, row, row, 1.0);
        row += 1;
    }
    for coefs in &rows {
        for &(p, v) in coefs {
            a[1 + p].add(0, row, row, v as f64);
        }
        row += 1;
    }
    let constraints = a.into_iter().enumerate().map(|(i, ai)| Constraint::new(ai, if i == 0 { 1.0 } else { 0.0 })).collect();
    Ok(ConicProgram::new(vec![BlockKind::Diagonal(size)], Sense::Maximize, c, constraints)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct XiDualResult {
    pub r: usize,
    /// `+inf` when `ξ_r*` is infeasible.
    #[serde(serialize_with = "crate::report::extended_f64::serialize")]
    pub value: f64,
    pub feasible: bool,
    #[serde(serialize_with = "crate::report::extended_f64::serialize")]
    pub lambda: f64,
    pub z: Option<Vec<Vec<f64>>>,
    #[serde(skip)]
    pub exact: Option<(BigRational, Vec<Vec<BigRational>>)>,
    pub verification: Report,
}

fn unpack_z<T: Scalar>(n: usize, y: &[T]) -> Vec<Vec<T>> {
    let mut z = vec![vec![T::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let v = y[1 + symmetric_pair_index(n, a, b)].clone();
            z[a][b] = v.clone();
            z[b][a] = v;
        }
    }
    z
}

pub fn to_f64_matrix<T: Scalar>(z: &[Vec<T>]) -> Vec<Vec<f64>> {
    z.iter().map(|row| row.iter().map(Scalar::to_f64).collect()).collect()
}

pub fn solve_xi_dual(g: &Graph, r: usize, form: XiForm, mode: LpMode, opts: &SolverOptions, tol: f64) -> Result<XiDualResult> {
    let n = g.n();
    let p = build_xi_dual(g, r, form)?;
    let infeasible = XiDualResult {
        r,
        value: f64::INFINITY,
        feasible: false,
        lambda: f64::INFINITY,
        z: None,
        exact: None,
        verification: Report::new(Vec::new()),
    };
    match mode {
        LpMode::Exact => {
            let s = solve_lp_exact(&p)?;
            match s.status {
                LpStatus::Unbounded => Ok(infeasible),
                LpStatus::Infeasible => Err(CoreError::Solver("copositive dual program reported unbounded".into())),
                LpStatus::Optimal => {
                    let z = unpack_z(n, &s.y);
                    let lambda = s.y[0].clone();
                    let verification = verify_xi_dual(g, r, &lambda, &z, &BigRational::from_integer(0.into()))?;
                    Ok(XiDualResult {
                        r,
                        value: s.objective.to_f64(),
                        feasible: true,
                        lambda: lambda.to_f64(),
                        z: Some(to_f64_matrix(&z)),
                        exact: Some((lambda, z)),
                        verification,
                    })
                }
            }
        }
        LpMode::Float => {
            let s = solve_conic(&p, opts)?;
            match s.status {
                Status::Unbounded => Ok(infeasible),
                Status::Optimal => {
                    let z = unpack_z(n, &s.y);
                    let verification = verify_xi_dual(g, r, &s.y[0], &z, &tol)?;
                    Ok(XiDualResult {
                        r,
                        value: s.primal_objective,
                        feasible: true,
                        lambda: s.y[0],
                        z: Some(to_f64_matrix(&z)),
                        exact: None,
                        verification,
                    })
                }
                other => Err(CoreError::Solver(format!("copositive dual program: {other:?}"))),
            }
        }
    }
}

/// Smallest `Σ_v m_v(m_v-1) Z(v,v) + Σ_{v≠w} m_v m_w Z(v,w)` over multisets of
/// size `r + 2`, with the first minimizing multiset.
pub fn min_multiset_sum<T: Scalar>(z: &[Vec<T>], r: usize) -> Result<(T, Vec<usize>)> {
    let n = z.len();
    let ms = Multisets::new(n, r + 2)?;
    let mut best: Option<(T, Vec<usize>)> = None;
    for m in ms.iter() {
        let mut s = T::zero();
        for (p, c) in multiset_pair_coefficients(n, m) {
            let (a, b) = symmetric_pair(n, p);
            s = s + T::from_bigint(&c.into()) * z[a][b].clone();
        }
        if best.as_ref().is_none_or(|(b, _)| s < *b) {
            best = Some((s, m.to_vec()));
        }
    }
    Ok(best.expect("at least one multiset"))
}

/// Feasibility of `(λ, Z)` for `ξ_r*`, plus the bound `λ ≥ |I|` read off a
/// maximum independent set `I` (`Σ_{x,y ∈ I} Z(x,y) ≥ 0` by copositivity).
pub fn verify_xi_dual<T: Scalar>(g: &Graph, r: usize, lambda: &T, z: &[Vec<T>], tol: &T) -> Result<Report> {
    let n = g.n();
    if z.len() != n || z.iter().any(|row| row.len() != n) {
        return Err(CoreError::Mismatch(format!("Z is not {n}x{n}")));
    }
    let mut report = Report::default();
    let one = T::one();
    let max_diag = (0..n).map(|x| z[x][x].clone()).fold(z[0][0].clone(), |a, b| if b > a { b } else { a });
    report.push(Check::compare("diagonal", &max_diag, Relation::Le, &(lambda.clone() - one.clone()), tol));
    let max_off = g
        .non_edges()
        .iter()
        .map(|&(x, y)| z[x][y].clone())
        .fold(None, |acc: Option<T>, v| Some(acc.map_or(v.clone(), |a| if v > a { v } else { a })));
    if let Some(max_off) = max_off {
        report.push(Check::compare("non_edges", &max_off, Relation::Le, &-one.clone(), tol));
    }
    let (min_sum, _) = min_multiset_sum(z, r)?;
    report.push(Check::compare("cone", &min_sum, Relation::Ge, &T::zero(), tol));
    let set = max_independent_set(g);
    let mut quad = T::zero();
    for x in set.iter() {
        for y in set.iter() {
            quad = quad + z[x][y].clone();
        }
    }
    report.push(Check::compare("independent_set_form", &quad, Relation::Ge, &T::zero(), tol));
    report.push(Check::compare("lambda_vs_alpha", lambda, Relation::Ge, &T::from_u64(set.len() as u64), tol));
    Ok(report)
}

/// `ξ_r`: maximize `α(V²)` subject to `α(Δ) = 1`, `α_E = 0`, `α = T_r*β`,
/// `β ≥ 0`. The variables are `γ = β / ((r+2)(r+1))` per multiset (or tuple), so
/// that every coefficient is an integer: `α(x,x) = Σ γ m_x(m_x-1)` and
/// `α(x,y) = Σ γ m_x m_y`.
pub fn build_xi_primal(g: &Graph, r: usize, form: XiForm) -> Result<ConicProgram> {
    let n = g.n();
    let rows = cone_rows(n, r, form)?;
    let d = ((r + 2) * (r + 1)) as f64;
    let mut obj = BlockSparse::new();
    let mut trace = BlockSparse::new();
    let edges = g.edges();
    let edge_pos: std::collections::HashMap<usize, usize> =
        edges.iter().enumerate().map(|(i, &(x, y))| (symmetric_pair_index(n, x, y), i)).collect();
    let mut edge_rows = vec![BlockSparse::new(); edges.len()];
    for (j, coefs) in rows.iter().enumerate() {
        obj.add(0, j, j, d);
        for &(p, v) in coefs {
            let (a, b) = symmetric_pair(n, p);
            if a == b {
                trace.add(0, j, j, v as f64);
            } else if let Some(&e) = edge_pos.get(&p) {
                edge_rows[e].add(0, j, j, v as f64 / 2.0);
            }
        }
    }
    let mut constraints = vec![Constraint::new(trace, 1.0)];
    constraints.extend(edge_rows.into_iter().map(|a| Constraint::new(a, 0.0)));
    Ok(ConicProgram::new(vec![BlockKind::Diagonal(rows.len())], Sense::Maximize, obj, constraints)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct XiPrimalResult {
    pub r: usize,
    /// `+inf` when the program is unbounded.
    #[serde(serialize_with = "crate::report::extended_f64::serialize")]
    pub value: f64,
    pub bounded: bool,
    /// `α` as a symmetric matrix (when bounded).
    pub alpha: Option<Vec<Vec<f64>>>,
    pub verification: Report,
}

/// `α` from the scaled variables `γ` of [`build_xi_primal`].
pub fn alpha_from_gamma<T: Scalar>(n: usize, r: usize, form: XiForm, gamma: &[T]) -> Result<Vec<Vec<T>>> {
    let rows = cone_rows(n, r, form)?;
    let mut alpha = vec![vec![T::zero(); n]; n];
    for (coefs, gm) in rows.iter().zip(gamma) {
        for &(p, v) in coefs {
            let (a, b) = symmetric_pair(n, p);
            if a == b {
                alpha[a][a] = alpha[a][a].clone() + T::from_bigint(&v.into()) * gm.clone();
            } else {
                let half = T::from_bigint(&(v / 2).into()) * gm.clone();
                alpha[a][b] = alpha[a][b].clone() + half.clone();
                alpha[b][a] = alpha[b][a].clone() + half;
            }
        }
    }
    Ok(alpha)
}

/// The five proof obligations on `α` (and `β` if given): nonnegativity,
/// `α_E = 0`, `α(Δ) = 1`, and `α(V²) ≥ target`.
pub fn verify_alpha<T: Scalar>(g: &Graph, alpha: &[Vec<T>], beta: Option<&[T]>, target: &T, tol: &T) -> Report {
    let n = g.n();
    let mut report = Report::default();
    if let Some(beta) = beta {
        let min = beta.iter().cloned().fold(T::zero(), |a, b| if b < a { b } else { a });
        report.push(Check::compare("beta_nonnegative", &min, Relation::Ge, &T::zero(), tol));
    }
    let mut min = alpha[0][0].clone();
    let mut total = T::zero();
    let mut trace = T::zero();
    for (i, row) in alpha.iter().enumerate() {
        for v in row {
            if *v < min {
                min = v.clone();
            }
            total = total + v.clone();
        }
        trace = trace + row[i].clone();
    }
    report.push(Check::compare("alpha_nonnegative", &min, Relation::Ge, &T::zero(), tol));
    let edge_max = g.edges().iter().map(|&(x, y)| alpha[x][y].abs()).fold(T::zero(), |a, b| if b > a { b } else { a });
    report.push(Check::compare("alpha_edges_zero", &edge_max, Relation::Le, &T::zero(), tol));
    report.push(Check::compare("alpha_diagonal_one", &trace, Relation::Eq, &T::one(), tol));
    report.push(Check::compare("alpha_total_vs_objective", &total, Relation::Ge, target, tol));
    debug_assert_eq!(alpha.len(), n);
    report
}

pub fn solve_xi_primal(g: &Graph, r: usize, form: XiForm, mode: LpMode, opts: &SolverOptions, tol: f64) -> Result<XiPrimalResult> {
    let n = g.n();
    let p = build_xi_primal(g, r, form)?;
    let unbounded =
        XiPrimalResult { r, value: f64::INFINITY, bounded: false, alpha: None, verification: Report::new(Vec::new()) };
    match mode {
        LpMode::Exact => {
            let s = solve_lp_exact(&p)?;
            match s.status {
                LpStatus::Unbounded => Ok(unbounded),
                LpStatus::Infeasible => Err(CoreError::Solver("measure program reported infeasible".into())),
                LpStatus::Optimal => {
                    let alpha = alpha_from_gamma(n, r, form, &s.x)?;
                    let verification = verify_alpha(g, &alpha, Some(&s.x), &s.objective, &BigRational::from_integer(0.into()));
                    Ok(XiPrimalResult {
                        r,
                        value: s.objective.to_f64(),
                        bounded: true,
                        alpha: Some(to_f64_matrix(&alpha)),
                        verification,
                    })
                }
            }
        }
        LpMode::Float => {
            let s = solve_conic(&p, opts)?;
            match s.status {
                Status::Unbounded => Ok(unbounded),
                Status::Optimal => {
                    let gamma: Vec<f64> = (0..p.blocks()[0].size()).map(|i| s.x[0].get(i, i)).collect();
                    let alpha = alpha_from_gamma(n, r, form, &gamma)?;
                    let verification = verify_alpha(g, &alpha, Some(&gamma), &s.primal_objective, &tol);
                    Ok(XiPrimalResult { r, value: s.primal_objective, bounded: true, alpha: Some(to_f64_matrix(&alpha)), verification })
                }
                other => Err(CoreError::Solver(format!("measure program: {other:?}"))),
            }
        }
    }
}

/// One cell of a bound table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "quantity", content = "index", rename_all = "snake_case")]
pub enum SweepCell {
    Delta(usize),
    XiDual(usize),
    XiPrimal(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct CellResult {
    pub cell: SweepCell,
    #[serde(serialize_with = "crate::report::extended_f64::serialize")]
    pub value: f64,
    pub status: String,
    pub checks_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub alpha: usize,
    pub cells: Vec<CellResult>,
    pub checks: Report,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub solver: SolverOptions,
    pub mode: LpMode,
    pub residual_tol: f64,
    pub sandwich_tol: f64,
    pub monotone_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { solver: SolverOptions::default(), mode: LpMode::Exact, residual_tol: 1e-6, sandwich_tol: 1e-5, monotone_tol: 1e-6 }
    }
}

pub fn sweep_cells(kmax: usize, rmax: usize) -> Vec<SweepCell> {
    let mut cells: Vec<SweepCell> = (2..=kmax).map(SweepCell::Delta).collect();
    cells.extend((0..=rmax).map(SweepCell::XiDual));
    cells.extend((0..=rmax).map(SweepCell::XiPrimal));
    cells
}

pub fn evaluate_cell(g: &Graph, cell: SweepCell, opts: &SweepOptions) -> Result<CellResult> {
    let tol = opts.residual_tol;
    let (value, status, checks_pass) = match cell {
        SweepCell::Delta(k) => {
            let b = solve_delta(g, k, &opts.solver, tol)?;
            (b.value, format!("{:?}", b.status), b.status == Status::Optimal && b.verification.pass)
        }
        SweepCell::XiDual(r) => {
            let x = solve_xi_dual(g, r, XiForm::Multiset, opts.mode, &opts.solver, tol)?;
            let status = if x.feasible { "Optimal" } else { "Infeasible" };
            (x.value, status.to_string(), x.verification.pass)
        }
        SweepCell::XiPrimal(r) => {
            let x = solve_xi_primal(g, r, XiForm::Multiset, opts.mode, &opts.solver, tol)?;
            let status = if x.bounded { "Optimal" } else { "Unbounded" };
            (x.value, status.to_string(), x.verification.pass)
        }
    };
    Ok(CellResult { cell, value, status, checks_pass })
}

/// Sandwich and monotonicity relations over solved cells.
pub fn assemble_sweep(g: &Graph, cells: Vec<CellResult>, opts: &SweepOptions) -> SweepTable {
    let alpha = max_independent_set(g).len();
    let find = |c: SweepCell| cells.iter().find(|x| x.cell == c).map(|x| x.value);
    let (st, mt) = (opts.sandwich_tol, opts.monotone_tol);
    let mut report = Report::new(Vec::new());
    for c in &cells {
        report.push(Check::ge(format!("{:?}_verified", c.cell), c.checks_pass as u8 as f64, 1.0, 0.0));
        if let SweepCell::Delta(k) = c.cell {
            report.push(Check::ge(format!("delta_{k}_vs_alpha"), c.value, alpha as f64, st));
            if let Some(next) = find(SweepCell::Delta(k + 1)) {
                report.push(Check::ge(format!("delta_{k}_vs_delta_{}", k + 1), c.value, next, mt));
            }
        }
        if let SweepCell::XiDual(r) = c.cell {
            if let Some(next) = find(SweepCell::XiDual(r + 1)) {
                report.push(Check::ge(format!("xi_dual_{r}_vs_xi_dual_{}", r + 1), c.value, next, mt));
            }
            if let Some(primal) = find(SweepCell::XiPrimal(r)) {
                report.push(Check::le(format!("xi_{r}_vs_xi_dual_{r}"), primal, c.value, st));
            }
        }
        if let SweepCell::XiPrimal(r) = c.cell {
            if let Some(delta) = find(SweepCell::Delta(r + 2)) {
                report.push(Check::le(format!("delta_{}_vs_xi_{r}", r + 2), delta, c.value, st));
            }
        }
    }
    SweepTable { alpha, cells, checks: report }
}

pub fn hierarchy_sweep(g: &Graph, kmax: usize, rmax: usize, opts: &SweepOptions) -> Result<SweepTable> {
    let cells = sweep_cells(kmax, rmax).into_iter().map(|c| evaluate_cell(g, c, opts)).collect::<Result<Vec<_>>>()?;
    Ok(assemble_sweep(g, cells, opts))
}
