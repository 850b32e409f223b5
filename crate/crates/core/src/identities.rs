//! Exact operator identities, evaluated over every labelled graph on a few
//! vertices. Shared by the test suite and the command-line self test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::family::{i1_set, independent_sets, SetPairsWithBase};
use crate::graph::{Graph, VertexSet};
use crate::hierarchies::{dirac_solution, MeasureVector};
use crate::operators::{nt_vector, op_bk, op_qst, op_tr_tuples, set_pair_vector, PairColumns};
use crate::report::{Check, Relation, Report};
use crate::transfer::{mu_block_sums, mu_matrix, phi_moments};

/// All `2^(n(n-1)/2)` labelled graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            Graph::from_edges(n, &edges).expect("valid")
        })
        .collect()
}

/// A fixed measure with distinct positive rational values.
pub fn sample_measure(g: &Graph, k: usize) -> Result<MeasureVector<BigRational>> {
    let fam = independent_sets(g, k)?;
    let values = (0..fam.len())
        .map(|i| BigRational::new(BigInt::from((i * 7 + 3) % 11 + 1), BigInt::from(i % 4 + 1)))
        .collect();
    Ok(MeasureVector { space: fam.space(), values })
}

fn exact_eq(name: String, lhs: &BigRational, rhs: &BigRational) -> Check {
    Check::compare(name, lhs, Relation::Eq, rhs, &BigRational::zero())
}

fn vectors_equal(name: String, a: &[BigRational], b: &[BigRational]) -> Check {
    let worst = if a.len() != b.len() {
        BigRational::one()
    } else {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(BigRational::zero(), |m, d| if d > m { d } else { m })
    };
    exact_eq(name, &worst, &BigRational::zero())
}

fn ints(v: Vec<BigInt>) -> Vec<BigRational> {
    v.into_iter().map(BigRational::from_integer).collect()
}

/// `(Q_{s,t}*ν)(V^t) = ⟨N_s, ν⟩` for a measure on `I_s`.
pub fn tuple_mass_identity(g: &Graph, s: usize, t: usize, nu: &MeasureVector<BigRational>) -> Result<Check> {
    let q = op_qst(g, s, t, s)?;
    let lhs = q.apply_adjoint(&nu.values).into_iter().fold(BigRational::zero(), |a, b| a + b);
    let ns = ints(nt_vector(g, s, s)?);
    let rhs = ns.iter().zip(&nu.values).fold(BigRational::zero(), |a, (x, y)| a + x * y);
    Ok(exact_eq(format!("tuple_mass_identity[n={},s={s},t={t}]", g.n()), &lhs, &rhs))
}

/// `Q_{s,t+2} T_t = Q_{s,2}` as matrices.
pub fn q_composition_identity(g: &Graph, s: usize, t: usize) -> Result<Check> {
    let left = op_qst(g, s, t + 2, s)?.compose(&op_tr_tuples(g.n(), t, PairColumns::Ordered)?)?;
    let right = op_qst(g, s, 2, s)?;
    let diff = if left == right { BigRational::zero() } else { BigRational::one() };
    Ok(exact_eq(format!("q_composition_identity[n={},s={s},t={t}]", g.n()), &diff, &BigRational::zero()))
}

/// `B_{r+2}(χ_∅⊗χ_∅⊗N_t) = N_t`, `B_{r+2}(χ_∅⊗χ_{I=1}⊗N_t) = N_{t+1}`,
/// `B_{r+2}(χ_{I=1}⊗χ_{I=1}⊗N_t) = N_{t+2}` on `I_{r+2}`.
pub fn b_evaluations(g: &Graph, r: usize, t: usize) -> Result<Vec<Check>> {
    let k = r + 2;
    let b = op_bk(g, k)?;
    let cols = SetPairsWithBase::new(g, k)?;
    let nt = ints(nt_vector(g, k - 2, t)?);
    let chi = |pos: usize, size: usize| if i1_set(pos).len() == size { BigRational::one() } else { BigRational::zero() };
    let mut out = Vec::new();
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let f = set_pair_vector(&cols, |s, tt, q| chi(s, i) * chi(tt, j) * nt[q].clone());
        let lhs = b.apply(&f);
        let rhs = ints(nt_vector(g, k, t + i + j)?);
        out.push(vectors_equal(format!("b_evaluation[n={},r={r},t={t},{i}{j}]", g.n()), &lhs, &rhs));
    }
    Ok(out)
}

/// `B_k 1` counts the ordered decompositions `S ∪ T ∪ Q = I`.
pub fn b_counts(g: &Graph, k: usize) -> Result<Check> {
    let b = op_bk(g, k)?;
    let cols = SetPairsWithBase::new(g, k)?;
    let rows = independent_sets(g, k)?;
    let ones = vec![BigRational::one(); cols.len()];
    let lhs = b.apply(&ones);
    let mut direct = vec![BigRational::zero(); rows.len()];
    for &q in cols.base().sets() {
        for s in 0..=g.n() {
            for t in 0..=g.n() {
                if let Some(i) = rows.index_of(i1_set(s).union(i1_set(t)).union(q)) {
                    direct[i] += BigRational::one();
                }
            }
        }
    }
    Ok(vectors_equal(format!("b_counts[n={},k={k}]", g.n()), &lhs, &direct))
}

/// `μ(I_{=i} × I_{=j}) = Φ_{t+i+j}` for all `t ≤ r`.
pub fn mu_sums(g: &Graph, nu: &MeasureVector<BigRational>, r: usize) -> Result<Vec<Check>> {
    let phi = phi_moments(g, nu, r + 2)?;
    let mut out = Vec::new();
    for t in 0..=r {
        let sums = mu_block_sums(&mu_matrix(g, nu, r, t)?);
        for i in 0..2 {
            for j in 0..2 {
                out.push(exact_eq(format!("mu_block[n={},r={r},t={t},{i}{j}]", g.n()), &sums[i][j], &phi[t + i + j]));
            }
        }
    }
    Ok(out)
}

/// `Φ_t = |I|^t` and `α(V²) = |I|` for the Dirac measure of `I`.
pub fn dirac_closed_forms(g: &Graph, set: VertexSet, r: usize) -> Result<Vec<Check>> {
    let nu = dirac_solution::<BigRational>(g, set, r + 2)?;
    let phi = phi_moments(g, &nu, r + 2)?;
    let m = BigRational::from_integer(BigInt::from(set.len()));
    let mut out: Vec<Check> = phi
        .iter()
        .enumerate()
        .map(|(t, p)| exact_eq(format!("dirac_phi[{set},t={t}]"), p, &num_traits::pow(m.clone(), t)))
        .collect();
    if !set.is_empty() {
        let res = crate::transfer::transfer(g, &nu, r, &BigRational::zero())?;
        let total = res.alpha.iter().flatten().fold(BigRational::zero(), |a, b| a + b);
        out.push(exact_eq(format!("dirac_alpha_total[{set},r={r}]"), &total, &m));
        let report = crate::transfer::verify_transfer(g, r, &res, &nu, &BigRational::zero())?;
        out.extend(report.checks.into_iter().map(|c| Check { name: format!("dirac_{}[{set},r={r}]", c.name), ..c }));
    }
    Ok(out)
}

/// All operator identities on every graph with `n ≤ nmax` vertices, `r ≤ rmax`.
pub fn operator_identity_suite(nmax: usize, rmax: usize) -> Result<Report> {
    let mut report = Report::default();
    for n in 1..=nmax {
        for g in all_graphs(n) {
            for s in 1..=rmax + 1 {
                let nu = sample_measure(&g, s)?;
                for t in 0..=s {
                    report.push(tuple_mass_identity(&g, s, t, &nu)?);
                }
                for t in 0..=s.saturating_sub(2) {
                    if t + 2 <= s {
                        report.push(q_composition_identity(&g, s, t)?);
                    }
                }
            }
            for r in 0..=rmax {
                for t in 0..=r {
                    for c in b_evaluations(&g, r, t)? {
                        report.push(c);
                    }
                }
                report.push(b_counts(&g, r + 2)?);
                let nu = sample_measure(&g, r + 2)?;
                for c in mu_sums(&g, &nu, r)? {
                    report.push(c);
                }
            }
        }
    }
    Ok(report)
}

/// Dirac closed forms for every independent set of size `≤ smax` in each graph.
pub fn dirac_suite(graphs: &[Graph], smax: usize, rmax: usize) -> Result<Report> {
    let mut report = Report::default();
    for g in graphs {
        let fam = independent_sets(g, smax)?;
        for &set in fam.sets() {
            for r in 0..=rmax {
                for c in dirac_closed_forms(g, set, r)? {
                    report.push(c);
                }
            }
        }
    }
    Ok(report)
}

