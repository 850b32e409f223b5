//! The linear maps `B_k`, `T_r`, `Q_{s,t}` as exact sparse matrices.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, surjection_count};
use crate::error::{CoreError, Result};
use crate::family::{
    i1_set, independent_sets, multiplicities, symmetric_pair_index, Multisets, SetPairsWithBase, Space, Tuples,
};
use crate::graph::{Graph, VertexSet};
use crate::scalar::Scalar;

/// Sparse matrix with exact rational entries between two labelled spaces.
/// Entries are sorted by `(row, col)`, unique and nonzero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseLinearMap {
    pub rows: Space,
    pub cols: Space,
    nrows: usize,
    ncols: usize,
    #[serde(skip)]
    entries: Vec<(usize, usize, BigRational)>,
}

impl SparseLinearMap {
    pub fn new(
        rows: Space,
        cols: Space,
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, BigRational)>,
    ) -> Self {
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut entries: Vec<(usize, usize, BigRational)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r},{c}) outside {nrows}x{ncols}");
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        SparseLinearMap { rows, cols, nrows, ncols, entries }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn entries(&self) -> &[(usize, usize, BigRational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(r, c)))
            .map(|i| self.entries[i].2.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn row(&self, r: usize) -> &[(usize, usize, BigRational)] {
        let lo = self.entries.partition_point(|e| e.0 < r);
        let hi = self.entries.partition_point(|e| e.0 <= r);
        &self.entries[lo..hi]
    }

    pub fn apply<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols, "input length");
        let mut out = vec![T::zero(); self.nrows];
        for (r, c, v) in &self.entries {
            out[*r] = out[*r].clone() + T::from_rational(v) * x[*c].clone();
        }
        out
    }

    pub fn apply_adjoint<T: Scalar>(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.nrows, "input length");
        let mut out = vec![T::zero(); self.ncols];
        for (r, c, v) in &self.entries {
            out[*c] = out[*c].clone() + T::from_rational(v) * y[*r].clone();
        }
        out
    }

    pub fn transpose(&self) -> SparseLinearMap {
        let t = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        SparseLinearMap::new(self.cols, self.rows, self.ncols, self.nrows, t)
    }

    /// The product `self · rhs`.
    pub fn compose(&self, rhs: &SparseLinearMap) -> Result<SparseLinearMap> {
        if self.ncols != rhs.nrows || self.cols != rhs.rows {
            return Err(CoreError::Mismatch(format!("{:?} vs {:?}", self.cols, rhs.rows)));
        }
        let mut out = Vec::new();
        for (r, c, v) in &self.entries {
            for (_, c2, w) in rhs.row(*c) {
                out.push((*r, *c2, v * w));
            }
        }
        Ok(SparseLinearMap::new(self.rows, rhs.cols, self.nrows, rhs.ncols, out))
    }

    /// One `row col numerator/denominator` line per entry.
    pub fn dump_triplets(&self) -> String {
        let mut s = String::new();
        for (r, c, v) in &self.entries {
            let _ = writeln!(s, "{r} {c} {}/{}", v.numer(), v.denom());
        }
        s
    }
}

/// The set of coordinates of a tuple.
pub fn flatten(tuple: &[usize]) -> VertexSet {
    VertexSet::from_vertices(tuple)
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `(B_k F)(I) = Σ_{S ∪ T ∪ Q = I} F(S, T, Q)`, with columns the unordered
/// `(S, T)` pairs of `I_1` times `Q ∈ I_{k-2}`; the entry is the number of
/// ordered arrangements (2 when `S ≠ T`).
pub fn op_bk(g: &Graph, k: usize) -> Result<SparseLinearMap> {
    let cols = SetPairsWithBase::new(g, k)?;
    let rows = independent_sets(g, k)?;
    let mut trip = Vec::new();
    for c in 0..cols.len() {
        let (s, t, q) = cols.get(c);
        let union = i1_set(s).union(i1_set(t)).union(cols.base().get(q));
        if let Some(r) = rows.index_of(union) {
            trip.push((r, c, int(if s == t { 1 } else { 2 })));
        }
    }
    Ok(SparseLinearMap::new(rows.space(), cols.space(), rows.len(), cols.len(), trip))
}

/// Column value of a kernel `F(S, T, Q)` on the unordered `B_k` columns,
/// i.e. the symmetrization `(F(S,T,Q) + F(T,S,Q)) / 2`.
pub fn set_pair_vector<T: Scalar>(cols: &SetPairsWithBase, f: impl Fn(usize, usize, usize) -> T) -> Vec<T> {
    let two = T::from_u64(2);
    (0..cols.len())
        .map(|c| {
            let (s, t, q) = cols.get(c);
            (f(s, t, q) + f(t, s, q)) / two.clone()
        })
        .collect()
}

/// How `T_r` addresses the two-variable kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairColumns {
    /// All ordered pairs, laid out as `Tuples(n, 2)`.
    Ordered,
    /// Upper triangle of a symmetric matrix.
    Symmetric,
}

/// Tuple form of `T_r`: the row of `x ∈ V^{r+2}` is
/// `Z ↦ (1/((r+2)(r+1))) Σ_{i≠j} Z(x_i, x_j)`.
pub fn op_tr_tuples(n: usize, r: usize, cols: PairColumns) -> Result<SparseLinearMap> {
    let tuples = Tuples::new(n, r + 2)?;
    let denom = BigInt::from(((r + 2) * (r + 1)) as u64);
    let (col_space, ncols) = match cols {
        PairColumns::Ordered => (Space::Tuples { n, t: 2 }, n * n),
        PairColumns::Symmetric => (Space::SymmetricPairs { n }, n * (n + 1) / 2),
    };
    let mut trip = Vec::new();
    for (row, x) in tuples.iter().enumerate() {
        for i in 0..x.len() {
            for j in 0..x.len() {
                if i == j {
                    continue;
                }
                let col = match cols {
                    PairColumns::Ordered => x[i] * n + x[j],
                    PairColumns::Symmetric => symmetric_pair_index(n, x[i].min(x[j]), x[i].max(x[j])),
                };
                trip.push((row, col, BigRational::new(BigInt::one(), denom.clone())));
            }
        }
    }
    Ok(SparseLinearMap::new(tuples.space(), col_space, tuples.len(), ncols, trip))
}

/// Multiset form of `T_r`. Each row equals the (common) tuple-form row of any
/// ordering of the multiset: `m_a(m_a-1)/D` on `(a,a)` and `2 m_a m_b / D` on
/// `(a,b)`, `D = (r+2)(r+1)`. A measure `β` on tuples enters through its
/// class sums.
pub fn op_tr(n: usize, r: usize) -> Result<SparseLinearMap> {
    let ms = Multisets::new(n, r + 2)?;
    let d = ((r + 2) * (r + 1)) as i64;
    let mut trip = Vec::new();
    for (row, m) in ms.iter().enumerate() {
        for (col, coef) in multiset_pair_coefficients(n, m) {
            trip.push((row, col, BigRational::new(BigInt::from(coef), BigInt::from(d))));
        }
    }
    Ok(SparseLinearMap::new(ms.space(), Space::SymmetricPairs { n }, ms.len(), n * (n + 1) / 2, trip))
}

/// Integer coefficients of `Σ_{i≠j} Z(x_i, x_j)` on the symmetric pairs for a
/// multiset: `m_a(m_a-1)` on the diagonal and `2 m_a m_b` off it.
pub fn multiset_pair_coefficients(n: usize, m: &[usize]) -> Vec<(usize, i64)> {
    let c = multiplicities(n, m);
    let support: Vec<usize> = (0..n).filter(|&v| c[v] > 0).collect();
    let mut out = Vec::new();
    for (ia, &a) in support.iter().enumerate() {
        let ca = c[a] as i64;
        if ca > 1 {
            out.push((symmetric_pair_index(n, a, a), ca * (ca - 1)));
        }
        for &b in &support[ia + 1..] {
            out.push((symmetric_pair_index(n, a, b), 2 * ca * c[b] as i64));
        }
    }
    out
}

/// `(Q_{s,t} F)(I) = Σ_{v ∈ V^s, ⌞v⌟ = I} F(v_1, …, v_t)`, rows `I_k`,
/// columns `V^t`.
pub fn op_qst(g: &Graph, s: usize, t: usize, k: usize) -> Result<SparseLinearMap> {
    if s == 0 || t > s {
        return Err(CoreError::InvalidParameter(format!("Q_{{s,t}} needs 1 <= s and t <= s, got s={s}, t={t}")));
    }
    let n = g.n();
    Tuples::new(n, s)?;
    let cols = Tuples::new(n, t)?;
    let rows = independent_sets(g, k)?;
    let mut trip = Vec::new();
    for (ri, &set) in rows.sets().iter().enumerate() {
        let members = set.to_vec();
        let m = members.len();
        if m > s || (m == 0 && s > 0) {
            continue;
        }
        // Prefixes w ∈ I^t; the remaining s - t coordinates must cover I \ ⌞w⌟.
        let prefixes = Tuples::new(m, t)?;
        for p in prefixes.iter() {
            let w: Vec<usize> = p.iter().map(|&i| members[i]).collect();
            let d = (set.0 & !flatten(&w).0).count_ones();
            let count = covering_count((s - t) as u32, m as u32, d);
            if !count.is_zero() {
                trip.push((ri, cols.index_of(&w), BigRational::from_integer(count)));
            }
        }
    }
    Ok(SparseLinearMap::new(rows.space(), cols.space(), rows.len(), cols.len(), trip))
}

/// Number of `len`-tuples over an `m`-set whose coordinates include a fixed
/// `d`-subset.
fn covering_count(len: u32, m: u32, d: u32) -> BigInt {
    let mut total = BigInt::zero();
    for i in 0..=d {
        let term = BigInt::from(binomial(d as u64, i as u64)) * BigInt::from(m - i).pow(len);
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `N_t` as a vector over `I_k`.
pub fn nt_vector(g: &Graph, k: usize, t: usize) -> Result<Vec<BigInt>> {
    let fam = independent_sets(g, k)?;
    Ok(fam.sets().iter().map(|s| surjection_count(t as u32, s.len() as u32)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, empty};
    use crate::scalar::rat;

    #[test]
    fn flatten_examples() {
        assert_eq!(flatten(&[1, 2, 1]), VertexSet::from_vertices(&[1, 2]));
        assert_eq!(flatten(&[]), VertexSet::EMPTY);
        assert_eq!(flatten(&[2]), VertexSet::singleton(2));
    }

    #[test]
    fn bk_on_an_edge() {
        let g = complete(2).unwrap();
        let b = op_bk(&g, 2).unwrap();
        let cols = SetPairsWithBase::new(&g, 2).unwrap();
        // Row {0}: F(∅,{0},∅) + F({0},∅,∅) + F({0},{0},∅).
        assert_eq!(b.get(1, cols.index_of(0, 1, 0)), rat(2, 1));
        assert_eq!(b.get(1, cols.index_of(1, 1, 0)), rat(1, 1));
        assert_eq!(b.row(1).len(), 2);
        // Column ({0},{1},∅) has no row.
        let c = cols.index_of(1, 2, 0);
        assert!(b.entries().iter().all(|e| e.1 != c));
    }

    #[test]
    fn bk_dimensions_on_c5() {
        let b = op_bk(&cycle(5).unwrap(), 3).unwrap();
        assert_eq!((b.nrows(), b.ncols()), (11, 126));
    }

    #[test]
    fn t0_is_identity_on_symmetric_matrices() {
        let t = op_tr_tuples(3, 0, PairColumns::Symmetric).unwrap();
        let z: Vec<BigRational> = (0..6).map(|i| rat(i as i64 - 2, 3)).collect();
        let tz = t.apply(&z);
        let tuples = Tuples::new(3, 2).unwrap();
        for (row, x) in tuples.iter().enumerate() {
            assert_eq!(tz[row], z[symmetric_pair_index(3, x[0].min(x[1]), x[0].max(x[1]))]);
        }
    }

    #[test]
    fn t1_row_of_xxy() {
        let t = op_tr_tuples(2, 1, PairColumns::Symmetric).unwrap();
        let row = Tuples::new(2, 3).unwrap().index_of(&[0, 0, 1]);
        assert_eq!(t.get(row, symmetric_pair_index(2, 0, 0)), rat(2, 6));
        assert_eq!(t.get(row, symmetric_pair_index(2, 0, 1)), rat(4, 6));
    }

    #[test]
    fn q22_and_q30_on_an_independent_pair() {
        let g = empty(2).unwrap();
        let q = op_qst(&g, 2, 2, 2).unwrap();
        let ab = 3;
        let cols = Tuples::new(2, 2).unwrap();
        assert_eq!(q.get(ab, cols.index_of(&[0, 1])), rat(1, 1));
        assert_eq!(q.get(ab, cols.index_of(&[1, 0])), rat(1, 1));
        assert_eq!(q.row(ab).len(), 2);
        let q30 = op_qst(&g, 3, 0, 2).unwrap();
        assert_eq!(q30.ncols(), 1);
        assert_eq!(q30.get(ab, 0), rat(6, 1));
    }

    #[test]
    fn nt_examples() {
        let c5 = cycle(5).unwrap();
        let n2: Vec<i64> = nt_vector(&c5, 2, 2).unwrap().iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(n2, vec![0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2]);
        let n0 = nt_vector(&c5, 2, 0).unwrap();
        assert_eq!(n0[0], BigInt::one());
        assert!(n0[1..].iter().all(|v| v.is_zero()));
    }

    #[test]
    fn triplet_dump() {
        let t = op_tr_tuples(1, 0, PairColumns::Ordered).unwrap();
        assert_eq!(t.dump_triplets(), "0 0 1/1\n");
    }
}
