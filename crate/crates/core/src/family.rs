//! Set families with canonical indexing.
//!
//! Orders, fixed globally:
//! * set families: by cardinality, then lexicographically by sorted member list
//!   (so `∅` is index 0 and singletons follow in vertex order);
//! * tuples: row-major (odometer, last coordinate fastest);
//! * multisets: as nondecreasing tuples, lexicographically.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{Graph, VertexSet};

/// Largest family or tuple space any builder will materialize.
pub const MAX_ELEMENTS: usize = 2_000_000;

/// Descriptor of an index space, used to label operator rows and columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    IndependentSets { n: usize, k: usize },
    Tuples { n: usize, t: usize },
    Multisets { n: usize, m: usize },
    /// `(S, T, Q)` with `S ≤ T` in `I_1` and `Q ∈ I_{k-2}`.
    SetPairsWithBase { n: usize, k: usize },
    /// Entries `(a, b)`, `a ≤ b`, of a symmetric `n × n` matrix.
    SymmetricPairs { n: usize },
}

/// Independent sets of size at most `k`.
#[derive(Clone, Debug)]
pub struct SetFamily {
    n: usize,
    k: usize,
    sets: Vec<VertexSet>,
    index: HashMap<VertexSet, usize>,
    /// `offsets[r]..offsets[r+1]` are the sets of size `r`.
    offsets: Vec<usize>,
}

impl SetFamily {
    pub fn space(&self) -> Space {
        Space::IndependentSets { n: self.n, k: self.k }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn get(&self, i: usize) -> VertexSet {
        self.sets[i]
    }

    pub fn index_of(&self, s: VertexSet) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// Number of members of size exactly `r`.
    pub fn count_of_size(&self, r: usize) -> usize {
        if r > self.k {
            0
        } else {
            self.offsets[r + 1] - self.offsets[r]
        }
    }

    pub fn range_of_size(&self, r: usize) -> std::ops::Range<usize> {
        if r > self.k {
            self.len()..self.len()
        } else {
            self.offsets[r]..self.offsets[r + 1]
        }
    }
}

pub fn independent_sets(g: &Graph, k: usize) -> Result<SetFamily> {
    fn rec(g: &Graph, size: usize, start: usize, cur: VertexSet, out: &mut Vec<VertexSet>) -> Result<()> {
        if cur.len() == size {
            if out.len() >= MAX_ELEMENTS {
                return Err(CoreError::TooLarge(format!("more than {MAX_ELEMENTS} independent sets")));
            }
            out.push(cur);
            return Ok(());
        }
        for v in start..g.n() {
            if g.neighbors(v).0 & cur.0 == 0 {
                rec(g, size, v + 1, cur.with(v), out)?;
            }
        }
        Ok(())
    }
    let mut sets = Vec::new();
    let mut offsets = vec![0];
    for r in 0..=k {
        rec(g, r, 0, VertexSet::EMPTY, &mut sets)?;
        offsets.push(sets.len());
    }
    let index = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    Ok(SetFamily { n: g.n(), k, sets, index, offsets })
}

/// `V^t` in row-major order, addressed arithmetically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tuples {
    n: usize,
    t: usize,
    len: usize,
}

impl Tuples {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        let len = (n as u128).checked_pow(t as u32).filter(|&l| l <= MAX_ELEMENTS as u128);
        match len {
            Some(len) => Ok(Tuples { n, t, len: len as usize }),
            None => Err(CoreError::TooLarge(format!("{n}^{t} tuples exceed {MAX_ELEMENTS}"))),
        }
    }

    pub fn space(&self) -> Space {
        Space::Tuples { n: self.n, t: self.t }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &v| acc * self.n + v)
    }

    pub fn get(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.t];
        for slot in out.iter_mut().rev() {
            *slot = i % self.n;
            i /= self.n;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

/// Multisets of size `m` over `0..n`, stored as nondecreasing tuples.
#[derive(Clone, Debug)]
pub struct Multisets {
    n: usize,
    m: usize,
    elements: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Multisets {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let count = crate::combinatorics::binomial((n + m).saturating_sub(1) as u64, m as u64);
        if count > num_bigint::BigUint::from(MAX_ELEMENTS) {
            return Err(CoreError::TooLarge(format!("{count} multisets of size {m} over {n}")));
        }
        let mut elements = Vec::new();
        let mut cur = Vec::with_capacity(m);
        fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == m {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                rec(n, m, v, cur, out);
                cur.pop();
            }
        }
        rec(n, m, 0, &mut cur, &mut elements);
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Ok(Multisets { n, m, elements, index })
    }

    pub fn space(&self) -> Space {
        Space::Multisets { n: self.n, m: self.m }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.elements.iter().map(Vec::as_slice)
    }

    /// Index of the multiset underlying an arbitrary tuple.
    pub fn index_of_tuple(&self, tuple: &[usize]) -> Option<usize> {
        let mut key = tuple.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }
}

/// Multiplicity vector of a tuple over `0..n`.
pub fn multiplicities(n: usize, tuple: &[usize]) -> Vec<u32> {
    let mut c = vec![0; n];
    for &v in tuple {
        c[v] += 1;
    }
    c
}

/// `I_1 = {∅} ∪ singletons`: position 0 is `∅`, position `x + 1` is `{x}`.
pub fn i1_set(pos: usize) -> VertexSet {
    if pos == 0 {
        VertexSet::EMPTY
    } else {
        VertexSet::singleton(pos - 1)
    }
}

/// Columns of `B_k`: `(Q, S, T)` with `Q` over `I_{k-2}` outermost, then `S ≤ T`
/// over `I_1` positions.
#[derive(Clone, Debug)]
pub struct SetPairsWithBase {
    n: usize,
    k: usize,
    base: SetFamily,
}

impl SetPairsWithBase {
    pub fn new(g: &Graph, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(CoreError::InvalidParameter(format!("k = {k} must be at least 2")));
        }
        let base = independent_sets(g, k - 2)?;
        if base.len().saturating_mul(pair_count(g.n())) > MAX_ELEMENTS {
            return Err(CoreError::TooLarge("B_k column space".into()));
        }
        Ok(SetPairsWithBase { n: g.n(), k, base })
    }

    pub fn space(&self) -> Space {
        Space::SetPairsWithBase { n: self.n, k: self.k }
    }

    pub fn base(&self) -> &SetFamily {
        &self.base
    }

    pub fn pairs_per_base(&self) -> usize {
        pair_count(self.n)
    }

    pub fn len(&self) -> usize {
        self.base.len() * self.pairs_per_base()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(S position, T position, Q index)`.
    pub fn get(&self, i: usize) -> (usize, usize, usize) {
        let per = self.pairs_per_base();
        let (s, t) = symmetric_pair(self.n + 1, i % per);
        (s, t, i / per)
    }

    pub fn index_of(&self, s: usize, t: usize, q: usize) -> usize {
        q * self.pairs_per_base() + symmetric_pair_index(self.n + 1, s.min(t), s.max(t))
    }
}

/// Unordered pairs with repetition over `n + 1` items.
fn pair_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Position of `(a, b)`, `a ≤ b < size`, in row-major upper-triangular order.
pub fn symmetric_pair_index(size: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < size);
    a * size - a * (a + 1) / 2 + b
}

pub fn symmetric_pair(size: usize, mut i: usize) -> (usize, usize) {
    for a in 0..size {
        let row = size - a;
        if i < row {
            return (a, a + i);
        }
        i -= row;
    }
    panic!("pair index out of range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, empty};

    #[test]
    fn family_examples() {
        let c5 = cycle(5).unwrap();
        let f = independent_sets(&c5, 2).unwrap();
        assert_eq!(f.len(), 11);
        assert_eq!(f.get(0), VertexSet::EMPTY);
        assert_eq!(f.get(1), VertexSet::singleton(0));
        assert_eq!(f.count_of_size(2), 5);
        assert_eq!(independent_sets(&empty(3).unwrap(), 3).unwrap().len(), 8);
        assert_eq!(independent_sets(&c5, 0).unwrap().sets(), &[VertexSet::EMPTY]);
    }

    #[test]
    fn lexicographic_within_size() {
        let f = independent_sets(&empty(4).unwrap(), 2).unwrap();
        let pairs: Vec<Vec<usize>> = f.range_of_size(2).map(|i| f.get(i).to_vec()).collect();
        assert_eq!(pairs, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn tuple_round_trip() {
        let t = Tuples::new(3, 4).unwrap();
        assert_eq!(t.len(), 81);
        for i in 0..t.len() {
            assert_eq!(t.index_of(&t.get(i)), i);
        }
        assert_eq!(t.get(5), vec![0, 0, 1, 2]);
        assert!(Tuples::new(10, 7).is_err());
        assert_eq!(Tuples::new(4, 0).unwrap().len(), 1);
    }

    #[test]
    fn multisets_in_order() {
        let m = Multisets::new(3, 2).unwrap();
        let all: Vec<&[usize]> = m.iter().collect();
        assert_eq!(all, vec![&[0, 0][..], &[0, 1], &[0, 2], &[1, 1], &[1, 2], &[2, 2]]);
        assert_eq!(m.index_of_tuple(&[2, 0]), Some(2));
        assert_eq!(Multisets::new(5, 5).unwrap().len(), 126);
    }

    #[test]
    fn set_pairs_layout() {
        let c5 = cycle(5).unwrap();
        let cols = SetPairsWithBase::new(&c5, 3).unwrap();
        assert_eq!(cols.len(), 126);
        for i in 0..cols.len() {
            let (s, t, q) = cols.get(i);
            assert!(s <= t);
            assert_eq!(cols.index_of(t, s, q), i);
        }
    }
}
