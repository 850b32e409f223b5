//! Conic programs with diagonal (LP) and positive-semidefinite blocks.
//!
//! * [`solve_conic`]: dense primal-dual interior-point method for desk-scale
//!   SDPs and LPs.
//! * [`solve_lp_exact`]: two-phase simplex over exact rationals (Bland's rule)
//!   for programs with diagonal blocks only.
//! * [`sdpa`]: sparse SDPA (`.dat-s`) export and import.
//! * [`check_solution`]: independent residual recomputation.

mod error;
mod ipm;
mod linalg;
mod program;
mod residual;
pub mod sdpa;
mod simplex;
mod solution;

pub use error::ConicError;
pub use ipm::{solve_conic, SolverOptions};
pub use linalg::min_eigenvalue;
pub use program::{BlockKind, BlockSparse, ConicProgram, Constraint, Entry, Sense};
pub use residual::{check_solution, ResidualCheck, ResidualReport};
pub use simplex::{ratio, solve_lp_exact, LpStatus, RationalSolution};
pub use solution::{compute_residuals, dual_slack, sparse_inner, BlockValue, Residuals, Solution, Status};
