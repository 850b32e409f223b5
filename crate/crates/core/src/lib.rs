//! Upper bounds on the independence number of finite graphs: the k-point
//! bound `Δ_k` (semidefinite) and the copositive hierarchy `ξ_r*`/`ξ_r`
//! (linear), with the solution transfer `Δ_{r+2} ≤ ξ_r` and the copositivity
//! certificates behind `ξ_r*`, all as executable, checked constructions.

pub mod combinatorics;
pub mod copositive;
pub mod error;
pub mod family;
pub mod graph;
pub mod hierarchies;
pub mod identities;
pub mod operators;
pub mod report;
pub mod scalar;
pub mod transfer;

pub use error::{CoreError, Result};
pub use graph::{Graph, VertexSet};
pub use report::{Check, Relation, Report};
