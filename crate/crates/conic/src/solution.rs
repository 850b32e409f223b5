use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::program::{BlockKind, BlockSparse, ConicProgram, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NumericalTrouble,
}

/// The value of one block of a block-diagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockValue {
    Dense(DMatrix<f64>),
    Diagonal(DVector<f64>),
}

impl BlockValue {
    pub fn zeros(kind: BlockKind) -> Self {
        match kind {
            BlockKind::Psd(n) => BlockValue::Dense(DMatrix::zeros(n, n)),
            BlockKind::Diagonal(n) => BlockValue::Diagonal(DVector::zeros(n)),
        }
    }

    pub fn identity(kind: BlockKind, scale: f64) -> Self {
        match kind {
            BlockKind::Psd(n) => BlockValue::Dense(DMatrix::identity(n, n) * scale),
            BlockKind::Diagonal(n) => BlockValue::Diagonal(DVector::from_element(n, scale)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            BlockValue::Dense(m) => m[(i, j)],
            BlockValue::Diagonal(d) => {
                if i == j {
                    d[i]
                } else {
                    0.0
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BlockValue::Dense(m) => m.nrows(),
            BlockValue::Diagonal(d) => d.len(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match self {
            BlockValue::Dense(m) => m.norm(),
            BlockValue::Diagonal(d) => d.norm(),
        }
    }

    /// Smallest eigenvalue (smallest entry for diagonal blocks).
    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            BlockValue::Dense(m) => linalg::min_eigenvalue(m),
            BlockValue::Diagonal(d) => d.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn inner(&self, other: &BlockValue) -> f64 {
        match (self, other) {
            (BlockValue::Dense(a), BlockValue::Dense(b)) => a.dot(b),
            (BlockValue::Diagonal(a), BlockValue::Diagonal(b)) => a.dot(b),
            _ => panic!("block kinds differ"),
        }
    }

    pub fn axpy(&mut self, alpha: f64, other: &BlockValue) {
        match (self, other) {
            (BlockValue::Dense(a), BlockValue::Dense(b)) => *a += b * alpha,
            (BlockValue::Diagonal(a), BlockValue::Diagonal(b)) => *a += b * alpha,
            _ => panic!("block kinds differ"),
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        match self {
            BlockValue::Dense(a) => *a *= alpha,
            BlockValue::Diagonal(a) => *a *= alpha,
        }
    }
}

/// `A • X` for symmetric sparse `A` and an arbitrary (not necessarily symmetric) `X`.
pub fn sparse_inner(a: &BlockSparse, x: &[BlockValue]) -> f64 {
    a.entries()
        .iter()
        .map(|e| {
            let blk = &x[e.block];
            if e.i == e.j {
                e.value * blk.get(e.i, e.i)
            } else {
                e.value * (blk.get(e.i, e.j) + blk.get(e.j, e.i))
            }
        })
        .sum()
}

/// Dense copy of a sparse symmetric block matrix, accumulated into `out` with weight `alpha`.
pub fn add_sparse(out: &mut [BlockValue], a: &BlockSparse, alpha: f64) {
    for e in a.entries() {
        match &mut out[e.block] {
            BlockValue::Dense(m) => {
                m[(e.i, e.j)] += alpha * e.value;
                if e.i != e.j {
                    m[(e.j, e.i)] += alpha * e.value;
                }
            }
            BlockValue::Diagonal(d) => d[e.i] += alpha * e.value,
        }
    }
}

/// Dual slack of `y`: `C - A*y` for minimization, `A*y - C` for maximization.
pub fn dual_slack(p: &ConicProgram, y: &[f64]) -> Vec<BlockValue> {
    let mut s: Vec<BlockValue> = p.blocks().iter().map(|&k| BlockValue::zeros(k)).collect();
    let sign = match p.sense() {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    add_sparse(&mut s, p.objective(), sign);
    for (c, &yi) in p.constraints().iter().zip(y) {
        add_sparse(&mut s, &c.coeffs, -sign * yi);
    }
    s
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖A(X) - b‖₂ / (1 + ‖b‖₂)`.
    pub primal_infeasibility: f64,
    /// Negative part of the smallest eigenvalue of the dual slack, relative to `1 + ‖C‖`.
    pub dual_infeasibility: f64,
    /// `|pobj - dobj| / (1 + |pobj| + |dobj|)`.
    pub relative_gap: f64,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub status: Status,
    pub x: Vec<BlockValue>,
    pub y: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub residuals: Residuals,
    pub iterations: usize,
}

impl Solution {
    /// Optimal value of the primal in its own sense, with the infinity convention:
    /// an infeasible minimization is `+inf`, an unbounded one `-inf` (and vice versa
    /// for maximization).
    pub fn value(&self, sense: Sense) -> f64 {
        let inf = match sense {
            Sense::Minimize => f64::INFINITY,
            Sense::Maximize => f64::NEG_INFINITY,
        };
        match self.status {
            Status::Infeasible => inf,
            Status::Unbounded => -inf,
            _ => self.primal_objective,
        }
    }
}

/// Recomputes residuals of `(x, y)` directly from the program data.
pub fn compute_residuals(p: &ConicProgram, x: &[BlockValue], y: &[f64]) -> (Residuals, f64, f64) {
    let b: Vec<f64> = p.rhs();
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rp = p
        .constraints()
        .iter()
        .map(|c| {
            let r = sparse_inner(&c.coeffs, x) - c.rhs;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    let s = dual_slack(p, y);
    let min_eig = s.iter().map(|b| b.min_eigenvalue()).fold(f64::INFINITY, f64::min);
    let cnorm = p.objective().frobenius_norm();
    let pobj = sparse_inner(p.objective(), x);
    let dobj: f64 = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
    let residuals = Residuals {
        primal_infeasibility: rp / (1.0 + bnorm),
        dual_infeasibility: if min_eig.is_finite() { (-min_eig).max(0.0) / (1.0 + cnorm) } else { 0.0 },
        relative_gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
    };
    (residuals, pobj, dobj)
}
