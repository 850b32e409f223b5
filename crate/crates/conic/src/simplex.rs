//! Two-phase tableau simplex over exact rationals with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ConicError;
use crate::program::{ConicProgram, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalSolution {
    pub status: LpStatus,
    /// Primal values, diagonal blocks concatenated in block order.
    pub x: Vec<BigRational>,
    /// Dual multipliers in the program's sign convention (see [`ConicProgram`]).
    pub y: Vec<BigRational>,
    /// Flattened indices of the basic variables of the final basis.
    pub basis: Vec<usize>,
    /// `C • x` at the final basis; zero unless `status` is `Optimal`.
    pub objective: BigRational,
}

impl RationalSolution {
    /// Objective as `f64` with the infinity convention of [`crate::Solution::value`].
    pub fn value(&self, sense: Sense) -> f64 {
        let inf = match sense {
            Sense::Minimize => f64::INFINITY,
            Sense::Maximize => f64::NEG_INFINITY,
        };
        match self.status {
            LpStatus::Optimal => self.objective.to_f64().unwrap_or(f64::NAN),
            LpStatus::Infeasible => inf,
            LpStatus::Unbounded => -inf,
        }
    }
}

fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).expect("program data is finite")
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    /// Reduced costs; `cost_rhs` holds minus the current objective.
    cost: Vec<BigRational>,
    cost_rhs: BigRational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let piv = self.rows[r][j].clone();
        if !piv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
            self.rhs[r] /= &piv;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[j].is_zero() {
            let f = self.cost[j].clone();
            for (v, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.cost_rhs -= &f * &prhs;
        }
        self.basis[r] = j;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(j) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }

    fn reset_cost(&mut self, c: &[BigRational]) {
        let ncols = self.cost.len();
        self.cost = (0..ncols)
            .map(|j| c.get(j).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        self.cost_rhs = BigRational::zero();
        for i in 0..self.rows.len() {
            let cb = c.get(self.basis[i]).cloned().unwrap_or_else(BigRational::zero);
            if cb.is_zero() {
                continue;
            }
            for (v, a) in self.cost.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *v -= &cb * a;
                }
            }
            self.cost_rhs -= &cb * &self.rhs[i];
        }
    }
}

/// Exact solution of an LP-shaped [`ConicProgram`] (all blocks diagonal).
pub fn solve_lp_exact(p: &ConicProgram) -> Result<RationalSolution, ConicError> {
    if !p.is_lp() {
        return Err(ConicError::PsdBlockInLp);
    }
    let offsets: Vec<usize> = p
        .blocks()
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.size();
            Some(o)
        })
        .collect();
    let n: usize = p.blocks().iter().map(|b| b.size()).sum();
    let m = p.num_constraints();

    let mut c_orig = vec![BigRational::zero(); n];
    for e in p.objective().entries() {
        c_orig[offsets[e.block] + e.i] += rat(e.value);
    }
    let c_min: Vec<BigRational> = match p.sense() {
        Sense::Minimize => c_orig.clone(),
        Sense::Maximize => c_orig.iter().map(|v| -v).collect(),
    };

    let mut a = vec![vec![BigRational::zero(); n]; m];
    let mut b = vec![BigRational::zero(); m];
    for (i, con) in p.constraints().iter().enumerate() {
        for e in con.coeffs.entries() {
            a[i][offsets[e.block] + e.i] += rat(e.value);
        }
        b[i] = rat(con.rhs);
    }
    let mut sign = vec![BigRational::one(); m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = a[i].clone();
        if b[i].is_negative() {
            sign[i] = -BigRational::one();
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        rows.push(row);
    }
    let rhs: Vec<BigRational> = b.iter().zip(&sign).map(|(v, s)| v * s).collect();
    let mut tab = Tableau {
        rows,
        rhs,
        cost: vec![BigRational::zero(); n + m],
        cost_rhs: BigRational::zero(),
        basis: (n..n + m).collect(),
    };

    // Phase 1: minimize the sum of artificials.
    let phase1: Vec<BigRational> = (0..n + m)
        .map(|j| if j >= n { BigRational::one() } else { BigRational::zero() })
        .collect();
    tab.reset_cost(&phase1);
    tab.run(n + m);
    let empty = |status| RationalSolution {
        status,
        x: vec![],
        y: vec![],
        basis: vec![],
        objective: BigRational::zero(),
    };
    if !tab.cost_rhs.is_zero() {
        return Ok(empty(LpStatus::Infeasible));
    }
    // Drive remaining (zero-valued) artificials out; drop redundant rows.
    let mut kept_rows: Vec<usize> = (0..m).collect();
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j);
                r += 1;
            } else {
                tab.rows.remove(r);
                tab.rhs.remove(r);
                tab.basis.remove(r);
                kept_rows.remove(r);
            }
        } else {
            r += 1;
        }
    }

    // Phase 2.
    tab.reset_cost(&c_min);
    if !tab.run(n) {
        return Ok(empty(LpStatus::Unbounded));
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in tab.basis.iter().enumerate() {
        x[j] = tab.rhs[i].clone();
    }
    let objective = c_orig.iter().zip(&x).fold(BigRational::zero(), |acc, (c, v)| acc + c * v);

    // Duals: solve B'y = C_B on the kept rows (in original row signs).
    let k = kept_rows.len();
    let mut sys: Vec<Vec<BigRational>> = (0..k)
        .map(|col| {
            let j = tab.basis[col];
            let mut row: Vec<BigRational> = kept_rows.iter().map(|&i| a[i][j].clone()).collect();
            row.push(c_orig[j].clone());
            row
        })
        .collect();
    let yk = gauss_solve(&mut sys);
    let mut y = vec![BigRational::zero(); m];
    for (pos, &i) in kept_rows.iter().enumerate() {
        y[i] = yk[pos].clone();
    }

    Ok(RationalSolution {
        status: LpStatus::Optimal,
        x,
        y,
        basis: tab.basis.clone(),
        objective,
    })
}

/// Solves a nonsingular square system given as augmented rows.
fn gauss_solve(sys: &mut [Vec<BigRational>]) -> Vec<BigRational> {
    let k = sys.len();
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| !sys[r][col].is_zero())
            .expect("basis matrix is nonsingular");
        sys.swap(col, piv);
        let p = sys[col][col].clone();
        for v in sys[col].iter_mut() {
            *v /= &p;
        }
        let prow = sys[col].clone();
        for (r, row) in sys.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, q) in row.iter_mut().zip(&prow) {
                *v -= &f * q;
            }
        }
    }
    sys.iter().map(|row| row[k].clone()).collect()
}

/// `num/den` as an exact rational, for tests and callers building exact data.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{BlockKind, BlockSparse, Constraint};

    fn lp(sense: Sense, c: &[f64], rows: &[(&[f64], f64)]) -> ConicProgram {
        let n = c.len();
        let mut obj = BlockSparse::new();
        for (i, &v) in c.iter().enumerate() {
            obj.add(0, i, i, v);
        }
        let cons = rows
            .iter()
            .map(|(a, b)| {
                let mut co = BlockSparse::new();
                for (i, &v) in a.iter().enumerate() {
                    co.add(0, i, i, v);
                }
                Constraint::new(co, *b)
            })
            .collect();
        ConicProgram::new(vec![BlockKind::Diagonal(n)], sense, obj, cons).unwrap()
    }

    #[test]
    fn max_with_upper_bound() {
        // max x s.t. x + s = 3/2.
        let p = lp(Sense::Maximize, &[1.0, 0.0], &[(&[1.0, 1.0], 1.5)]);
        let sol = solve_lp_exact(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, ratio(3, 2));
        assert_eq!(sol.x[0], ratio(3, 2));
        assert_eq!(sol.y[0], ratio(1, 1));
    }

    #[test]
    fn infeasible_system() {
        // x <= -1 with x >= 0: x + s = -1.
        let p = lp(Sense::Maximize, &[1.0, 0.0], &[(&[1.0, 1.0], -1.0)]);
        let sol = solve_lp_exact(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        assert_eq!(sol.value(Sense::Maximize), f64::NEG_INFINITY);
    }

    #[test]
    fn unbounded_system() {
        let p = lp(Sense::Maximize, &[1.0, 0.0], &[(&[1.0, -1.0], 0.0)]);
        let sol = solve_lp_exact(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        assert_eq!(sol.value(Sense::Maximize), f64::INFINITY);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // min x1 + 2 x2 s.t. x1 + x2 = 1 (twice).
        let p = lp(Sense::Minimize, &[1.0, 2.0], &[(&[1.0, 1.0], 1.0), (&[1.0, 1.0], 1.0)]);
        let sol = solve_lp_exact(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, ratio(1, 1));
        let ysum = &sol.y[0] + &sol.y[1];
        assert_eq!(ysum, ratio(1, 1));
    }

    #[test]
    fn rejects_psd_blocks() {
        let p = ConicProgram::new(vec![BlockKind::Psd(2)], Sense::Minimize, BlockSparse::new(), vec![]).unwrap();
        assert_eq!(solve_lp_exact(&p), Err(ConicError::PsdBlockInLp));
    }
}
