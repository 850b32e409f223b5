//! Primal-dual path-following interior-point method.
//!
//! Infeasible-start iterations on the HKM search direction with a Mehrotra
//! predictor-corrector step. The Schur complement `M_ij = A_i • (X A_j S⁻¹)` is
//! formed densely and factored by Cholesky. Internally the program is always
//! a minimization; maximization problems are negated on the way in and out.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::ConicError;
use crate::linalg::{max_step_diag, max_step_psd, symmetrize};
use crate::program::{BlockKind, ConicProgram, Sense};
use crate::solution::{compute_residuals, BlockValue, Solution, Status};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Target for relative gap and relative primal/dual residuals.
    pub tolerance: f64,
    /// Threshold on the normalized certificate residual that triggers an
    /// infeasibility/unboundedness verdict.
    pub infeasibility_tolerance: f64,
    /// Residual a reported certificate must pass when re-checked.
    pub certificate_tolerance: f64,
    pub max_iterations: usize,
    pub max_block_dim: usize,
    pub max_constraints: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            infeasibility_tolerance: 1e-8,
            certificate_tolerance: 1e-6,
            max_iterations: 200,
            max_block_dim: 200,
            max_constraints: 5000,
        }
    }
}

/// Diagonal shifts tried, relative to the largest Schur diagonal, when the
/// Schur complement is not numerically positive definite.
const SCHUR_SHIFTS: [f64; 2] = [1e-12, 1e-10];

type Terms = Vec<(usize, Vec<(usize, usize, f64)>)>;

struct Data {
    blocks: Vec<BlockKind>,
    c: Vec<BlockValue>,
    b: DVector<f64>,
    m: usize,
    /// Per block: the constraints touching it and their upper-triangular entries.
    terms: Vec<Terms>,
    /// Per diagonal block and index: `(constraint, coefficient)`.
    diag_terms: Vec<Vec<Vec<(usize, f64)>>>,
}

impl Data {
    fn new(p: &ConicProgram) -> Self {
        let blocks = p.blocks().to_vec();
        let sign = match p.sense() {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut c: Vec<BlockValue> = blocks.iter().map(|&k| BlockValue::zeros(k)).collect();
        crate::solution::add_sparse(&mut c, p.objective(), sign);
        let mut terms: Vec<Terms> = vec![Vec::new(); blocks.len()];
        let mut diag_terms: Vec<Vec<Vec<(usize, f64)>>> =
            blocks.iter().map(|k| if k.is_psd() { Vec::new() } else { vec![Vec::new(); k.size()] }).collect();
        for (ci, con) in p.constraints().iter().enumerate() {
            let mut per_block: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); blocks.len()];
            for e in con.coeffs.entries() {
                per_block[e.block].push((e.i, e.j, e.value));
                if !blocks[e.block].is_psd() {
                    diag_terms[e.block][e.i].push((ci, e.value));
                }
            }
            for (bi, ents) in per_block.into_iter().enumerate() {
                if !ents.is_empty() {
                    terms[bi].push((ci, ents));
                }
            }
        }
        Self {
            blocks,
            c,
            b: DVector::from_vec(p.rhs()),
            m: p.num_constraints(),
            terms,
            diag_terms,
        }
    }

    fn zeros(&self) -> Vec<BlockValue> {
        self.blocks.iter().map(|&k| BlockValue::zeros(k)).collect()
    }

    /// `A(X)` for a possibly non-symmetric `X`.
    fn op_a(&self, x: &[BlockValue]) -> DVector<f64> {
        let mut out = DVector::zeros(self.m);
        for (bi, terms) in self.terms.iter().enumerate() {
            for (ci, ents) in terms {
                let mut acc = 0.0;
                for &(p, q, v) in ents {
                    acc += if p == q {
                        v * x[bi].get(p, p)
                    } else {
                        v * (x[bi].get(p, q) + x[bi].get(q, p))
                    };
                }
                out[*ci] += acc;
            }
        }
        out
    }

    /// `Σ y_i A_i`.
    fn op_at(&self, y: &DVector<f64>) -> Vec<BlockValue> {
        let mut out = self.zeros();
        for (bi, terms) in self.terms.iter().enumerate() {
            for (ci, ents) in terms {
                let yi = y[*ci];
                if yi == 0.0 {
                    continue;
                }
                for &(p, q, v) in ents {
                    match &mut out[bi] {
                        BlockValue::Dense(m) => {
                            m[(p, q)] += yi * v;
                            if p != q {
                                m[(q, p)] += yi * v;
                            }
                        }
                        BlockValue::Diagonal(d) => d[p] += yi * v,
                    }
                }
            }
        }
        out
    }

    fn schur(&self, x: &[BlockValue], sinv: &[BlockValue]) -> DMatrix<f64> {
        let mut schur = DMatrix::zeros(self.m, self.m);
        for (bi, terms) in self.terms.iter().enumerate() {
            match (&x[bi], &sinv[bi]) {
                (BlockValue::Dense(xm), BlockValue::Dense(si)) => {
                    let n = xm.nrows();
                    let mut g = DMatrix::zeros(n, n);
                    for (cj, ents_j) in terms {
                        g.fill(0.0);
                        for &(p, q, v) in ents_j {
                            g.ger(v, &xm.column(p), &si.column(q), 1.0);
                            if p != q {
                                g.ger(v, &xm.column(q), &si.column(p), 1.0);
                            }
                        }
                        for (ci, ents_i) in terms {
                            let mut acc = 0.0;
                            for &(p, q, v) in ents_i {
                                acc += if p == q { v * g[(p, p)] } else { v * (g[(p, q)] + g[(q, p)]) };
                            }
                            schur[(*ci, *cj)] += acc;
                        }
                    }
                }
                (BlockValue::Diagonal(xd), BlockValue::Diagonal(sd)) => {
                    for (k, list) in self.diag_terms[bi].iter().enumerate() {
                        let w = xd[k] * sd[k];
                        for &(ci, vi) in list {
                            for &(cj, vj) in list {
                                schur[(ci, cj)] += vi * vj * w;
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        symmetrize(&schur)
    }

    fn initial_point(&self) -> (Vec<BlockValue>, Vec<BlockValue>) {
        let mut xs = Vec::new();
        let mut ss = Vec::new();
        for (bi, &kind) in self.blocks.iter().enumerate() {
            let n = kind.size() as f64;
            let mut ratio: f64 = 0.0;
            let mut amax: f64 = 0.0;
            for (ci, ents) in &self.terms[bi] {
                let norm = ents
                    .iter()
                    .map(|&(p, q, v)| if p == q { v * v } else { 2.0 * v * v })
                    .sum::<f64>()
                    .sqrt();
                ratio = ratio.max((1.0 + self.b[*ci].abs()) / (1.0 + norm));
                amax = amax.max(norm);
            }
            let xi = 10f64.max(n.sqrt()).max(n * ratio);
            let eta = 10f64.max(n.sqrt()).max(self.c[bi].frobenius_norm()).max(amax);
            xs.push(BlockValue::identity(kind, xi));
            ss.push(BlockValue::identity(kind, eta));
        }
        (xs, ss)
    }
}

fn inner(a: &[BlockValue], b: &[BlockValue]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u.inner(v)).sum()
}

fn norm(a: &[BlockValue]) -> f64 {
    a.iter().map(|u| u.frobenius_norm().powi(2)).sum::<f64>().sqrt()
}

fn inverse(s: &[BlockValue]) -> Option<Vec<BlockValue>> {
    s.iter()
        .map(|blk| match blk {
            BlockValue::Dense(m) => {
                Cholesky::new(m.clone()).map(|ch| BlockValue::Dense(symmetrize(&ch.inverse())))
            }
            BlockValue::Diagonal(d) => {
                if d.iter().all(|&v| v > 0.0) {
                    Some(BlockValue::Diagonal(d.map(|v| 1.0 / v)))
                } else {
                    None
                }
            }
        })
        .collect()
}

/// `sym(U V W)` blockwise.
fn sym_product(u: &[BlockValue], v: &[BlockValue], w: &[BlockValue]) -> Vec<BlockValue> {
    u.iter()
        .zip(v)
        .zip(w)
        .map(|((a, b), c)| match (a, b, c) {
            (BlockValue::Dense(a), BlockValue::Dense(b), BlockValue::Dense(c)) => {
                BlockValue::Dense(symmetrize(&(a * b * c)))
            }
            (BlockValue::Diagonal(a), BlockValue::Diagonal(b), BlockValue::Diagonal(c)) => {
                BlockValue::Diagonal(a.component_mul(b).component_mul(c))
            }
            _ => unreachable!(),
        })
        .collect()
}

fn max_step(x: &[BlockValue], dx: &[BlockValue]) -> f64 {
    x.iter()
        .zip(dx)
        .map(|(a, b)| match (a, b) {
            (BlockValue::Dense(a), BlockValue::Dense(b)) => max_step_psd(a, b),
            (BlockValue::Diagonal(a), BlockValue::Diagonal(b)) => max_step_diag(a.as_slice(), b.as_slice()),
            _ => unreachable!(),
        })
        .fold(f64::INFINITY, f64::min)
}

fn factor_schur(mut m: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(ch) = Cholesky::new(m.clone()) {
        return Some(ch);
    }
    let scale = m.diagonal().iter().fold(1.0f64, |a, &v| a.max(v.abs()));
    let mut applied = 0.0;
    for shift in SCHUR_SHIFTS {
        let add = shift * scale - applied;
        for i in 0..m.nrows() {
            m[(i, i)] += add;
        }
        applied = shift * scale;
        if let Some(ch) = Cholesky::new(m.clone()) {
            return Some(ch);
        }
    }
    None
}

struct Direction {
    dx: Vec<BlockValue>,
    dy: DVector<f64>,
    ds: Vec<BlockValue>,
}

impl Data {
    fn direction(
        &self,
        chol: &Cholesky<f64, Dyn>,
        x: &[BlockValue],
        sinv: &[BlockValue],
        rp: &DVector<f64>,
        rd: &[BlockValue],
        target: &[BlockValue],
    ) -> Direction {
        let x_rd_sinv: Vec<BlockValue> = x
            .iter()
            .zip(rd)
            .zip(sinv)
            .map(|((a, b), c)| match (a, b, c) {
                (BlockValue::Dense(a), BlockValue::Dense(b), BlockValue::Dense(c)) => BlockValue::Dense(a * b * c),
                (BlockValue::Diagonal(a), BlockValue::Diagonal(b), BlockValue::Diagonal(c)) => {
                    BlockValue::Diagonal(a.component_mul(b).component_mul(c))
                }
                _ => unreachable!(),
            })
            .collect();
        let rhs = rp - self.op_a(target) + self.op_a(&x_rd_sinv);
        let dy = if self.m > 0 { chol.solve(&rhs) } else { DVector::zeros(0) };
        let aty = self.op_at(&dy);
        let ds: Vec<BlockValue> = rd
            .iter()
            .zip(&aty)
            .map(|(r, a)| {
                let mut out = r.clone();
                out.axpy(-1.0, a);
                out
            })
            .collect();
        let corr = sym_product(x, &ds, sinv);
        let dx = target
            .iter()
            .zip(&corr)
            .map(|(t, c)| {
                let mut out = t.clone();
                out.axpy(-1.0, c);
                out
            })
            .collect();
        Direction { dx, dy, ds }
    }
}

fn check_limits(p: &ConicProgram, opts: &SolverOptions) -> Result<(), ConicError> {
    if p.largest_psd_block() > opts.max_block_dim {
        return Err(ConicError::TooLarge(format!(
            "PSD block of order {} exceeds {}",
            p.largest_psd_block(),
            opts.max_block_dim
        )));
    }
    if p.num_constraints() > opts.max_constraints {
        return Err(ConicError::TooLarge(format!(
            "{} constraints exceed {}",
            p.num_constraints(),
            opts.max_constraints
        )));
    }
    Ok(())
}

pub fn solve_conic(p: &ConicProgram, opts: &SolverOptions) -> Result<Solution, ConicError> {
    check_limits(p, opts)?;
    let data = Data::new(p);
    let nu: f64 = data.blocks.iter().map(|k| k.size()).sum::<usize>().max(1) as f64;
    let bnorm = data.b.norm();
    let cnorm = norm(&data.c);
    let (mut x, mut s) = data.initial_point();
    let mut y = DVector::zeros(data.m);
    let mut status = Status::IterationLimit;
    let mut iterations = 0;

    for iter in 0..=opts.max_iterations {
        iterations = iter;
        let ax = data.op_a(&x);
        let rp = &data.b - &ax;
        let aty = data.op_at(&y);
        let rd: Vec<BlockValue> = data
            .c
            .iter()
            .zip(&aty)
            .zip(&s)
            .map(|((c, a), sb)| {
                let mut r = c.clone();
                r.axpy(-1.0, a);
                r.axpy(-1.0, sb);
                r
            })
            .collect();
        let pobj = inner(&data.c, &x);
        let dobj = data.b.dot(&y);
        let xs = inner(&x, &s);
        let mu = xs / nu;
        let denom = 1.0 + pobj.abs() + dobj.abs();
        let pinf = rp.norm() / (1.0 + bnorm);
        let dinf = norm(&rd) / (1.0 + cnorm);
        let gap = ((pobj - dobj).abs() / denom).max(xs / denom);
        if pinf <= opts.tolerance && dinf <= opts.tolerance && gap <= opts.tolerance {
            status = Status::Optimal;
            break;
        }
        // Primal infeasibility: y/(b'y) with A*y + S = C - Rd nearly in -K.
        if dobj > 0.0 {
            let mut aty_s = aty.clone();
            for (a, sb) in aty_s.iter_mut().zip(&s) {
                a.axpy(1.0, sb);
            }
            if norm(&aty_s) / dobj < opts.infeasibility_tolerance
                && primal_infeasibility_certificate(&aty, dobj) >= -opts.certificate_tolerance
            {
                status = Status::Infeasible;
                break;
            }
        }
        // Dual infeasibility: X/(-C•X) with A(X) nearly zero.
        if pobj < 0.0 && ax.norm() / (-pobj) < opts.infeasibility_tolerance {
            status = Status::Unbounded;
            break;
        }
        if iter == opts.max_iterations {
            break;
        }

        let Some(sinv) = inverse(&s) else {
            status = Status::NumericalTrouble;
            break;
        };
        let Some(chol) = factor_schur(data.schur(&x, &sinv)) else {
            status = Status::NumericalTrouble;
            break;
        };

        let neg_x: Vec<BlockValue> = x
            .iter()
            .map(|b| {
                let mut o = b.clone();
                o.scale(-1.0);
                o
            })
            .collect();
        let pred = data.direction(&chol, &x, &sinv, &rp, &rd, &neg_x);
        let ap = max_step(&x, &pred.dx).min(1.0);
        let ad = max_step(&s, &pred.ds).min(1.0);
        let mut x_aff = x.clone();
        let mut s_aff = s.clone();
        for (a, d) in x_aff.iter_mut().zip(&pred.dx) {
            a.axpy(ap, d);
        }
        for (a, d) in s_aff.iter_mut().zip(&pred.ds) {
            a.axpy(ad, d);
        }
        let mu_aff = inner(&x_aff, &s_aff) / nu;
        let sigma = (mu_aff / mu).max(0.0).powi(3).min(1.0);

        let second = sym_product(&pred.dx, &pred.ds, &sinv);
        let target: Vec<BlockValue> = sinv
            .iter()
            .zip(&x)
            .zip(&second)
            .map(|((si, xb), sc)| {
                let mut t = si.clone();
                t.scale(sigma * mu);
                t.axpy(-1.0, xb);
                t.axpy(-1.0, sc);
                t
            })
            .collect();
        let dir = data.direction(&chol, &x, &sinv, &rp, &rd, &target);
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let step_p = (gamma * max_step(&x, &dir.dx)).min(1.0);
        let step_d = (gamma * max_step(&s, &dir.ds)).min(1.0);
        if step_p.max(step_d) < 1e-10 {
            status = Status::NumericalTrouble;
            break;
        }
        for (a, d) in x.iter_mut().zip(&dir.dx) {
            a.axpy(step_p, d);
            if let BlockValue::Dense(m) = a {
                *m = symmetrize(m);
            }
        }
        for (a, d) in s.iter_mut().zip(&dir.ds) {
            a.axpy(step_d, d);
            if let BlockValue::Dense(m) = a {
                *m = symmetrize(m);
            }
        }
        y += &dir.dy * step_d;
    }

    let y_out: Vec<f64> = match p.sense() {
        Sense::Minimize => y.iter().copied().collect(),
        Sense::Maximize => y.iter().map(|v| -v).collect(),
    };
    let (residuals, pobj, dobj) = compute_residuals(p, &x, &y_out);
    Ok(Solution {
        status,
        x,
        y: y_out,
        primal_objective: pobj,
        dual_objective: dobj,
        residuals,
        iterations,
    })
}

/// Smallest eigenvalue of `-A*y / b'y`, the cone-membership part of a primal
/// infeasibility certificate.
fn primal_infeasibility_certificate(aty: &[BlockValue], dobj: f64) -> f64 {
    aty.iter()
        .map(|b| {
            let mut c = b.clone();
            c.scale(-1.0 / dobj);
            c.min_eigenvalue()
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{BlockSparse, Constraint};

    #[test]
    fn two_by_two_correlation() {
        // max X12 s.t. X11 = X22 = 1, X ⪰ 0.
        let p = ConicProgram::new(
            vec![BlockKind::Psd(2)],
            Sense::Maximize,
            BlockSparse::new().with(0, 0, 1, 0.5),
            vec![
                Constraint::new(BlockSparse::new().with(0, 0, 0, 1.0), 1.0),
                Constraint::new(BlockSparse::new().with(0, 1, 1, 1.0), 1.0),
            ],
        )
        .unwrap();
        let sol = solve_conic(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.primal_objective - 1.0).abs() < 1e-7, "{}", sol.primal_objective);
        assert!((sol.x[0].get(0, 1) - 1.0).abs() < 1e-7);
        assert!(sol.primal_objective <= sol.dual_objective + 1e-6);
    }

    #[test]
    fn one_variable_lp() {
        // max x s.t. x + s = 1, x, s >= 0.
        let p = ConicProgram::new(
            vec![BlockKind::Diagonal(2)],
            Sense::Maximize,
            BlockSparse::new().with(0, 0, 0, 1.0),
            vec![Constraint::new(
                BlockSparse::new().with(0, 0, 0, 1.0).with(0, 1, 1, 1.0),
                1.0,
            )],
        )
        .unwrap();
        let sol = solve_conic(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.value(Sense::Maximize) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn detects_infeasible_lp() {
        // x1 + x2 = -1 with x >= 0.
        let p = ConicProgram::new(
            vec![BlockKind::Diagonal(2)],
            Sense::Minimize,
            BlockSparse::new(),
            vec![Constraint::new(
                BlockSparse::new().with(0, 0, 0, 1.0).with(0, 1, 1, 1.0),
                -1.0,
            )],
        )
        .unwrap();
        let sol = solve_conic(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Infeasible);
        assert_eq!(sol.value(Sense::Minimize), f64::INFINITY);
    }

    #[test]
    fn detects_unbounded_lp() {
        // max x1 s.t. x1 - x2 = 0.
        let p = ConicProgram::new(
            vec![BlockKind::Diagonal(2)],
            Sense::Maximize,
            BlockSparse::new().with(0, 0, 0, 1.0),
            vec![Constraint::new(
                BlockSparse::new().with(0, 0, 0, 1.0).with(0, 1, 1, -1.0),
                0.0,
            )],
        )
        .unwrap();
        let sol = solve_conic(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Unbounded);
        assert_eq!(sol.value(Sense::Maximize), f64::INFINITY);
    }

    #[test]
    fn block_cap_enforced() {
        let p = ConicProgram::new(vec![BlockKind::Psd(201)], Sense::Minimize, BlockSparse::new(), vec![]).unwrap();
        assert!(matches!(
            solve_conic(&p, &SolverOptions::default()),
            Err(ConicError::TooLarge(_))
        ));
    }
}
