//! Block-structured conic programs in standard form.
//!
//! A [`ConicProgram`] describes the primal
//!
//! ```text
//!   optimize  C • X
//!   s.t.      A_i • X = b_i      (i = 1..m)
//!             X = diag(X_1, ..., X_p),  X_j ⪰ 0 (Psd) or X_j ≥ 0 (Diagonal)
//! ```
//!
//! and, implicitly, its dual. For `Sense::Minimize` the dual is
//! `max b'y  s.t.  C - Σ y_i A_i ⪰ 0`; for `Sense::Maximize` it is
//! `min b'y  s.t.  Σ y_i A_i - C ⪰ 0`. Programs whose natural variables are
//! free (the LMI side) are placed on the dual and read back from `y`.

use serde::{Deserialize, Serialize};

use crate::error::ConicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    Psd(usize),
    Diagonal(usize),
}

impl BlockKind {
    pub fn size(self) -> usize {
        match self {
            BlockKind::Psd(n) | BlockKind::Diagonal(n) => n,
        }
    }

    pub fn is_psd(self) -> bool {
        matches!(self, BlockKind::Psd(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// One upper-triangular entry `(i <= j)` of a symmetric block.
///
/// An off-diagonal entry stands for both `(i, j)` and `(j, i)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Sparse symmetric block-diagonal matrix stored by its upper triangle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlockSparse {
    entries: Vec<Entry>,
}

impl BlockSparse {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `value` to the symmetric pair `(i, j)`, `(j, i)` of `block`.
    pub fn add(&mut self, block: usize, i: usize, j: usize, value: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.entries.push(Entry { block, i, j, value });
    }

    pub fn with(mut self, block: usize, i: usize, j: usize, value: f64) -> Self {
        self.add(block, i, j, value);
        self
    }

    /// Builds from full-matrix triplets `(block, i, j, value)`; both halves of an
    /// off-diagonal pair must be given with equal values.
    pub fn from_full_triplets(triplets: &[(usize, usize, usize, f64)]) -> Result<Self, ConicError> {
        let mut lower = std::collections::BTreeMap::new();
        let mut upper = std::collections::BTreeMap::new();
        let mut out = BlockSparse::new();
        for &(block, i, j, value) in triplets {
            if i == j {
                out.add(block, i, j, value);
            } else if i < j {
                *upper.entry((block, i, j)).or_insert(0.0) += value;
            } else {
                *lower.entry((block, j, i)).or_insert(0.0) += value;
            }
        }
        let keys: std::collections::BTreeSet<_> = upper.keys().chain(lower.keys()).copied().collect();
        for key in keys {
            let a = upper.get(&key).copied().unwrap_or(0.0);
            let b = lower.get(&key).copied().unwrap_or(0.0);
            if a != b {
                return Err(ConicError::NonSymmetric { block: key.0, i: key.1, j: key.2 });
            }
            out.add(key.0, key.1, key.2, a);
        }
        out.canonicalize();
        Ok(out)
    }

    /// Sorts by `(block, i, j)`, merges duplicates and drops zeros.
    pub fn canonicalize(&mut self) {
        self.entries.sort_by_key(|a| (a.block, a.i, a.j));
        let mut merged: Vec<Entry> = Vec::with_capacity(self.entries.len());
        for e in self.entries.drain(..) {
            match merged.last_mut() {
                Some(last) if (last.block, last.i, last.j) == (e.block, e.i, e.j) => {
                    last.value += e.value
                }
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.value != 0.0);
        self.entries = merged;
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries restricted to one block.
    pub fn block_entries(&self, block: usize) -> impl Iterator<Item = &Entry> + '_ {
        self.entries.iter().filter(move |e| e.block == block)
    }

    /// Frobenius norm of the full symmetric matrix.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| if e.i == e.j { e.value * e.value } else { 2.0 * e.value * e.value })
            .sum::<f64>()
            .sqrt()
    }

    fn validate(&self, blocks: &[BlockKind], what: &str) -> Result<(), ConicError> {
        for e in &self.entries {
            let kind = *blocks.get(e.block).ok_or(ConicError::NoSuchBlock(e.block))?;
            if e.j >= kind.size() {
                return Err(ConicError::EntryOutOfRange {
                    block: e.block,
                    i: e.i,
                    j: e.j,
                    size: kind.size(),
                });
            }
            if !kind.is_psd() && e.i != e.j {
                return Err(ConicError::OffDiagonalEntry { block: e.block, i: e.i, j: e.j });
            }
            if !e.value.is_finite() {
                return Err(ConicError::NonFinite(what.to_string()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: BlockSparse,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: BlockSparse, rhs: f64) -> Self {
        Self { coeffs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicProgram {
    blocks: Vec<BlockKind>,
    sense: Sense,
    objective: BlockSparse,
    constraints: Vec<Constraint>,
}

impl ConicProgram {
    pub fn new(
        blocks: Vec<BlockKind>,
        sense: Sense,
        mut objective: BlockSparse,
        mut constraints: Vec<Constraint>,
    ) -> Result<Self, ConicError> {
        objective.canonicalize();
        objective.validate(&blocks, "objective")?;
        for (k, c) in constraints.iter_mut().enumerate() {
            c.coeffs.canonicalize();
            c.coeffs.validate(&blocks, &format!("constraint {k}"))?;
            if !c.rhs.is_finite() {
                return Err(ConicError::NonFinite(format!("rhs of constraint {k}")));
            }
        }
        Ok(Self { blocks, sense, objective, constraints })
    }

    pub fn blocks(&self) -> &[BlockKind] {
        &self.blocks
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &BlockSparse {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn rhs(&self) -> Vec<f64> {
        self.constraints.iter().map(|c| c.rhs).collect()
    }

    /// True when every block is diagonal, i.e. the program is an LP.
    pub fn is_lp(&self) -> bool {
        self.blocks.iter().all(|b| !b.is_psd())
    }

    pub fn largest_psd_block(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.is_psd())
            .map(|b| b.size())
            .max()
            .unwrap_or(0)
    }

    pub fn total_psd_dim(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_psd()).map(|b| b.size()).sum()
    }
}
