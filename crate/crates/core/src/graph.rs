//! Finite simple graphs on at most 32 vertices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub const MAX_VERTICES: usize = 32;

/// Subset of `0..n` as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn from_vertices(vs: &[usize]) -> Self {
        VertexSet(vs.iter().fold(0, |acc, &v| acc | (1 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    pub fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(CoreError::InvalidParameter(format!("vertex count {n} not in 1..={MAX_VERTICES}")));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Builds a graph from an edge list, ignoring duplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(CoreError::InvalidParameter(format!("edge ({u},{v}) out of range for n = {}", self.n)));
        }
        if u == v {
            return Err(CoreError::InvalidParameter(format!("loop at vertex {u}")));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet(if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.pairs(true)
    }

    /// Distinct non-adjacent pairs `(u, v)` with `u < v`.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        self.pairs(false)
    }

    fn pairs(&self, adjacent: bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) == adjacent {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| self.adj[v] & s.0 == 0)
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph { n: self.n, adj: vec![0; self.n] };
        for (u, v) in self.edges() {
            g.adj[perm[u]] |= 1 << perm[v];
            g.adj[perm[v]] |= 1 << perm[u];
        }
        g
    }
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let err = |msg: String| CoreError::Parse { line, msg };
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if graph.is_some() {
                    return Err(err("duplicate problem line".into()));
                }
                let fmt = toks.next();
                if !matches!(fmt, Some("edge") | Some("col")) {
                    return Err(err(format!("expected 'p edge n m', found '{raw}'")));
                }
                let n: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("missing or invalid vertex count".into()))?;
                toks.next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| err("missing or invalid edge count".into()))?;
                graph = Some(Graph::empty(n).map_err(|e| err(e.to_string()))?);
            }
            Some("e") => {
                let g = graph.as_mut().ok_or_else(|| err("edge before problem line".into()))?;
                let mut endpoint = || -> Result<usize> {
                    let v: usize = toks
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err("invalid edge line".into()))?;
                    if v == 0 || v > g.n {
                        return Err(err(format!("vertex {v} out of range 1..={}", g.n)));
                    }
                    Ok(v - 1)
                };
                let u = endpoint()?;
                let v = endpoint()?;
                if u == v {
                    return Err(err(format!("loop at vertex {}", u + 1)));
                }
                g.add_edge(u, v).map_err(|e| err(e.to_string()))?;
            }
            Some(other) => return Err(err(format!("unknown line type '{other}'"))),
        }
    }
    graph.ok_or(CoreError::Parse { line: 0, msg: "missing problem line".into() })
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n, g.num_edges());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(CoreError::InvalidParameter(format!("cycle needs at least 3 vertices, got {n}")));
    }
    Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn path(n: usize) -> Result<Graph> {
    Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn empty(n: usize) -> Result<Graph> {
    Graph::empty(n)
}

/// Outer 5-cycle `0..5`, spokes `i, i+5`, inner pentagram on `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("valid")
}

/// Kneser graph K(m, s): `s`-subsets of `0..m` in lexicographic order, adjacent when disjoint.
pub fn kneser(m: usize, s: usize) -> Result<Graph> {
    if s == 0 || s > m {
        return Err(CoreError::InvalidParameter(format!("kneser({m},{s}) needs 1 <= s <= m")));
    }
    let mut subsets = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<VertexSet>) {
        if cur.len() == s {
            out.push(VertexSet::from_vertices(cur));
            return;
        }
        for v in start..m {
            cur.push(v);
            rec(v + 1, m, s, cur, out);
            cur.pop();
        }
    }
    if m > MAX_VERTICES {
        return Err(CoreError::TooLarge(format!("kneser({m},{s}) ground set")));
    }
    let count = crate::combinatorics::binomial(m as u64, s as u64);
    if count > num_bigint::BigUint::from(MAX_VERTICES) {
        return Err(CoreError::TooLarge(format!("kneser({m},{s}) has {count} vertices")));
    }
    rec(0, m, s, &mut cur, &mut subsets);
    let mut edges = Vec::new();
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            if subsets[i].0 & subsets[j].0 == 0 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(subsets.len(), &edges)
}

/// Deterministic G(n, p). Uses the 64-bit LCG
/// `state = state * 6364136223846793005 + 1442695040888963407` seeded with `seed`,
/// drawing `u = (state >> 11) / 2^53` once per pair `(i, j)`, `i < j`, in
/// lexicographic order; the edge is present when `u < p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::InvalidParameter(format!("edge probability {p} not in [0,1]")));
    }
    let mut state = seed;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (state >> 11) as f64 / (1u64 << 53) as f64;
            if u < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Graph from a `name:params` spec (`cycle:5`, `path:3`, `complete:4`, `empty:3`,
/// `petersen`, `kneser:5,2`, `gnp:8,0.5,42`) or a DIMACS file path.
pub fn from_spec(spec: &str) -> Result<Graph> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let bad = || CoreError::InvalidParameter(format!("bad graph spec '{spec}'"));
    let ints = || -> Result<Vec<usize>> { params.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect() };
    let one = || -> Result<usize> {
        match ints()?.as_slice() {
            [n] => Ok(*n),
            _ => Err(bad()),
        }
    };
    match name {
        "cycle" => cycle(one()?),
        "path" => path(one()?),
        "complete" => complete(one()?),
        "empty" => empty(one()?),
        "petersen" if params.is_empty() => Ok(petersen()),
        "kneser" => match ints()?.as_slice() {
            [m, s] => kneser(*m, *s),
            _ => Err(bad()),
        },
        "gnp" => {
            let parts: Vec<&str> = params.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let n = parts[0].parse().map_err(|_| bad())?;
            let p = parts[1].parse().map_err(|_| bad())?;
            let seed = parts[2].parse().map_err(|_| bad())?;
            gnp(n, p, seed)
        }
        _ => {
            let text = std::fs::read_to_string(spec).map_err(|source| CoreError::Io { path: spec.to_string(), source })?;
            parse_dimacs(&text)
        }
    }
}

/// Maximum independent set by branch and bound; the bound is the number of
/// cliques in a greedy clique cover of the candidate set.
pub fn max_independent_set(g: &Graph) -> VertexSet {
    fn clique_cover_bound(g: &Graph, mut cand: u32) -> usize {
        let mut cliques = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique_cand = cand & g.adj[v];
            cand &= !(1 << v);
            while clique_cand != 0 {
                let w = clique_cand.trailing_zeros() as usize;
                clique_cand &= g.adj[w];
                cand &= !(1 << w);
            }
            cliques += 1;
        }
        cliques
    }
    fn rec(g: &Graph, cur: u32, cand: u32, best: &mut u32) {
        if cand == 0 {
            if cur.count_ones() > best.count_ones() {
                *best = cur;
            }
            return;
        }
        if cur.count_ones() as usize + clique_cover_bound(g, cand) <= best.count_ones() as usize {
            return;
        }
        // Branch on a vertex of minimum degree within the candidates.
        let v = VertexSet(cand)
            .iter()
            .min_by_key(|&v| (g.adj[v] & cand).count_ones())
            .expect("nonempty");
        rec(g, cur | 1 << v, cand & !(1 << v) & !g.adj[v], best);
        rec(g, cur, cand & !(1 << v), best);
    }
    let mut best = 0u32;
    rec(g, 0, g.vertices().0, &mut best);
    VertexSet(best)
}

pub fn alpha_exact(g: &Graph) -> usize {
    max_independent_set(g).len()
}

/// Plain subset enumeration, for cross-checking on small graphs.
pub fn alpha_brute_force(g: &Graph) -> Result<usize> {
    if g.n > 20 {
        return Err(CoreError::TooLarge(format!("brute force on {} vertices", g.n)));
    }
    Ok((0u32..1 << g.n)
        .filter(|&s| g.is_independent(VertexSet(s)))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// Lexicographically largest adjacency string over all vertex orders, by
/// backtracking with prefix pruning. Limited to 12 vertices.
pub fn canonical_form(g: &Graph) -> Result<Vec<bool>> {
    if g.n > 12 {
        return Err(CoreError::TooLarge(format!("canonical form on {} vertices", g.n)));
    }
    struct Search<'a> {
        g: &'a Graph,
        order: Vec<usize>,
        code: Vec<bool>,
        best: Option<Vec<bool>>,
    }
    impl Search<'_> {
        fn rec(&mut self, used: u32) {
            let d = self.order.len();
            if d == self.g.n {
                if self.best.as_ref().is_none_or(|b| self.code > *b) {
                    self.best = Some(self.code.clone());
                }
                return;
            }
            for v in 0..self.g.n {
                if used >> v & 1 == 1 {
                    continue;
                }
                let start = self.code.len();
                for &u in &self.order {
                    self.code.push(self.g.has_edge(u, v));
                }
                let prune = self.best.as_ref().is_some_and(|b| self.code[..] < b[..self.code.len()]);
                if !prune {
                    self.order.push(v);
                    self.rec(used | 1 << v);
                    self.order.pop();
                }
                self.code.truncate(start);
            }
        }
    }
    let mut s = Search { g, order: Vec::new(), code: Vec::new(), best: None };
    s.rec(0);
    Ok(s.best.unwrap_or_default())
}

pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    Ok(a.n == b.n && a.num_edges() == b.num_edges() && canonical_form(a)? == canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_examples() {
        let g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(parse_dimacs("p edge 2 0\n").unwrap().num_edges(), 0);
        match parse_dimacs("p edge 3 1\ne 1 5\n") {
            Err(CoreError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_dimacs("p edge 3 1\ne 2 2\n"), Err(CoreError::Parse { line: 2, .. })));
        assert!(matches!(parse_dimacs("p edgy 3 1\n"), Err(CoreError::Parse { line: 1, .. })));
    }

    #[test]
    fn dimacs_dedups_and_round_trips() {
        let g = parse_dimacs("c hi\np edge 4 3\ne 1 2\ne 2 1\ne 3 4\n").unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(parse_dimacs(&write_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn generator_counts() {
        let c5 = cycle(5).unwrap();
        assert_eq!((c5.n(), c5.num_edges()), (5, 5));
        let p = petersen();
        assert_eq!((p.n(), p.num_edges()), (10, 15));
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert!(cycle(2).is_err());
        assert!(kneser(2, 3).is_err());
        assert!(empty(0).is_err());
    }

    #[test]
    fn non_edges_complement_edges() {
        let g = gnp(9, 0.4, 7).unwrap();
        let mut all = g.edges();
        all.extend(g.non_edges());
        all.sort();
        assert_eq!(all.len(), 36);
        all.dedup();
        assert_eq!(all.len(), 36);
    }

    #[test]
    fn kneser_5_2_is_petersen() {
        assert!(isomorphic(&kneser(5, 2).unwrap(), &petersen()).unwrap());
        assert!(!isomorphic(&cycle(10).unwrap(), &petersen()).unwrap());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_exact(&cycle(5).unwrap()), 2);
        assert_eq!(alpha_exact(&petersen()), 4);
        assert_eq!(alpha_exact(&complete(7).unwrap()), 1);
        assert_eq!(alpha_exact(&empty(32).unwrap()), 32);
    }

    #[test]
    fn specs() {
        assert_eq!(from_spec("path:3").unwrap().edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(from_spec("gnp:8,0.5,42").unwrap(), gnp(8, 0.5, 42).unwrap());
        assert!(from_spec("cycle:x").is_err());
        assert!(matches!(from_spec("/nonexistent/file"), Err(CoreError::Io { .. })));
    }
}
