//! The transfer `ν ↦ (β, α)` from a `Δ_{r+2}`-feasible measure to a feasible
//! point of `ξ_r`, with the moment identities it rests on.

use serde::Serialize;

use crate::combinatorics::{multinomial, surjection_count};
use crate::error::{CoreError, Result};
use crate::family::{i1_set, independent_sets, multiplicities, Multisets, Space};
use crate::graph::{Graph, VertexSet};
use crate::hierarchies::{singleton_mass, verify_alpha, MeasureVector};
use crate::operators::flatten;
use crate::report::{Check, Relation, Report};
use crate::scalar::Scalar;

fn measure_order<T>(g: &Graph, nu: &MeasureVector<T>) -> Result<usize> {
    match nu.space {
        Space::IndependentSets { n, k } if n == g.n() => Ok(k),
        other => Err(CoreError::Mismatch(format!("expected a measure on independent sets of the graph, got {other:?}"))),
    }
}

/// `Φ_t = ⟨N_t, ν⟩` for `t = 0..=tmax`.
pub fn phi_moments<T: Scalar>(g: &Graph, nu: &MeasureVector<T>, tmax: usize) -> Result<Vec<T>> {
    let k = measure_order(g, nu)?;
    let fam = independent_sets(g, k)?;
    if fam.len() != nu.values.len() {
        return Err(CoreError::Mismatch(format!("measure has {} values, I_{k} has {}", nu.values.len(), fam.len())));
    }
    Ok((0..=tmax)
        .map(|t| {
            fam.sets().iter().zip(&nu.values).fold(T::zero(), |acc, (s, v)| {
                acc + T::from_bigint(&surjection_count(t as u32, s.len() as u32)) * v.clone()
            })
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferResult<T = f64> {
    pub r: usize,
    /// Over `Multisets(n, r+2)`: the class sums of `Φ_{r+1}^{-1} Q_{r+2}*ν`.
    pub beta: MeasureVector<T>,
    /// `T_r*β` as a symmetric matrix.
    pub alpha: Vec<Vec<T>>,
    /// `Φ_0..=Φ_{r+2}`.
    pub phi: Vec<T>,
}

/// `β = Φ_{r+1}^{-1} Q_{r+2}*ν` (tuple `v` weighted `ν(⌞v⌟)`) and `α = T_r*β`.
pub fn transfer<T: Scalar>(g: &Graph, nu: &MeasureVector<T>, r: usize, tol: &T) -> Result<TransferResult<T>> {
    let k = measure_order(g, nu)?;
    if k != r + 2 {
        return Err(CoreError::Mismatch(format!("transfer at level {r} needs a measure on I_{}, got I_{k}", r + 2)));
    }
    let n = g.n();
    let fam = independent_sets(g, k)?;
    let mass = singleton_mass(g, nu);
    if mass <= *tol {
        return Err(CoreError::Degenerate(format!("singleton mass {:?} is not positive", mass.to_f64())));
    }
    let phi = phi_moments(g, nu, r + 2)?;
    let denom = phi[r + 1].clone();
    if denom <= *tol {
        return Err(CoreError::Degenerate(format!("moment {} = {} is not positive", r + 1, denom.to_f64())));
    }
    let ms = Multisets::new(n, r + 2)?;
    let d = T::from_u64(((r + 2) * (r + 1)) as u64);
    let mut beta = Vec::with_capacity(ms.len());
    let mut alpha = vec![vec![T::zero(); n]; n];
    for m in ms.iter() {
        let b = match fam.index_of(flatten(m)) {
            Some(idx) => {
                let counts = multiplicities(n, m);
                let classes = T::from_bigint(&multinomial(&counts).into());
                classes * nu.values[idx].clone() / denom.clone()
            }
            None => T::zero(),
        };
        if !b.is_zero() {
            let counts = multiplicities(n, m);
            for x in (0..n).filter(|&x| counts[x] > 0) {
                for y in (0..n).filter(|&y| counts[y] > 0) {
                    let c = if x == y { counts[x] as u64 * (counts[x] as u64 - 1) } else { counts[x] as u64 * counts[y] as u64 };
                    if c > 0 {
                        alpha[x][y] = alpha[x][y].clone() + T::from_u64(c) * b.clone() / d.clone();
                    }
                }
            }
        }
        beta.push(b);
    }
    Ok(TransferResult { r, beta: MeasureVector { space: ms.space(), values: beta }, alpha, phi })
}

/// `β ≥ 0`, `α ≥ 0`, `α_E = 0`, `α(Δ) = 1`, `α(V²) ≥ ν(I_{=1})`.
pub fn verify_transfer<T: Scalar>(
    g: &Graph,
    r: usize,
    result: &TransferResult<T>,
    nu: &MeasureVector<T>,
    tol: &T,
) -> Result<Report> {
    let n = g.n();
    if result.r != r || result.alpha.len() != n || result.beta.space != (Space::Multisets { n, m: r + 2 }) {
        return Err(CoreError::Mismatch("transfer result does not match graph and level".into()));
    }
    Ok(verify_alpha(g, &result.alpha, Some(&result.beta.values), &singleton_mass(g, nu), tol))
}

/// `μ(S, T) = Σ_{Q ∈ I_r} N_t(Q) (B_{r+2}*ν)(S, T, Q)` over `I_1 × I_1`.
pub fn mu_matrix<T: Scalar>(g: &Graph, nu: &MeasureVector<T>, r: usize, t: usize) -> Result<Vec<Vec<T>>> {
    let k = measure_order(g, nu)?;
    if k != r + 2 {
        return Err(CoreError::Mismatch(format!("μ at level {r} needs a measure on I_{}, got I_{k}", r + 2)));
    }
    if t > r {
        return Err(CoreError::InvalidParameter(format!("t = {t} exceeds r = {r}")));
    }
    let n = g.n();
    let fam = independent_sets(g, k)?;
    let bases = independent_sets(g, r)?;
    let mut mu = vec![vec![T::zero(); n + 1]; n + 1];
    for &q in bases.sets() {
        let w = T::from_bigint(&surjection_count(t as u32, q.len() as u32));
        if w.is_zero() {
            continue;
        }
        for (a, row) in mu.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                if let Some(idx) = fam.index_of(i1_set(a).union(i1_set(b)).union(q)) {
                    *cell = cell.clone() + w.clone() * nu.values[idx].clone();
                }
            }
        }
    }
    Ok(mu)
}

/// `[[μ(I_{=0}²), μ(I_{=0}×I_{=1})], [μ(I_{=1}×I_{=0}), μ(I_{=1}²)]]`.
pub fn mu_block_sums<T: Scalar>(mu: &[Vec<T>]) -> [[T; 2]; 2] {
    let mut s: [[T; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
    for (a, row) in mu.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            let (i, j) = (usize::from(a > 0), usize::from(b > 0));
            s[i][j] = s[i][j].clone() + v.clone();
        }
    }
    s
}

/// The 2×2 moment matrices `[[Φ_t, Φ_{t+1}], [Φ_{t+1}, Φ_{t+2}]]`, `t ≤ r`, and
/// the chain `Φ_{r+2}/Φ_{r+1} ≥ Φ_1/Φ_0` they imply.
pub fn moment_psd_check<T: Scalar>(phi: &[T], r: usize, tol: &T) -> Result<Report> {
    if phi.len() < r + 3 {
        return Err(CoreError::InvalidParameter(format!("{} moments given, {} needed", phi.len(), r + 3)));
    }
    let mut report = Report::default();
    for t in 0..=r {
        let det = phi[t].clone() * phi[t + 2].clone() - phi[t + 1].clone() * phi[t + 1].clone();
        report.push(Check::compare(format!("moment_det[{t}]"), &det, Relation::Ge, &T::zero(), tol));
        let trace = phi[t].clone() + phi[t + 2].clone();
        report.push(Check::compare(format!("moment_trace[{t}]"), &trace, Relation::Ge, &T::zero(), tol));
    }
    if phi[0].is_positive() && phi[r + 1].is_positive() {
        let lhs = phi[r + 2].clone() / phi[r + 1].clone();
        let rhs = phi[1].clone() / phi[0].clone();
        report.push(Check::compare("moment_chain", &lhs, Relation::Ge, &rhs, tol));
    } else {
        report.push(Check::compare("moment_chain_denominators", &T::zero(), Relation::Ge, &T::one(), tol));
    }
    Ok(report)
}

/// Everything checked for one measure at one level: the transfer obligations,
/// the moment chain, and the `μ` block sums for every `t ≤ r`.
pub fn transfer_report<T: Scalar>(g: &Graph, nu: &MeasureVector<T>, r: usize, tol: &T) -> Result<(TransferResult<T>, Report)> {
    let res = transfer(g, nu, r, tol)?;
    let mut report = verify_transfer(g, r, &res, nu, tol)?;
    report.extend(moment_psd_check(&res.phi, r, tol)?);
    for t in 0..=r {
        let sums = mu_block_sums(&mu_matrix(g, nu, r, t)?);
        for (i, row) in sums.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                report.push(Check::compare(format!("mu_block[{t}][{i}{j}]"), v, Relation::Eq, &res.phi[t + i + j], tol));
            }
        }
    }
    Ok((res, report))
}

/// Convenience for tests and the CLI: the Dirac measure of `set` on `I_{r+2}`.
pub fn dirac_transfer<T: Scalar>(g: &Graph, set: VertexSet, r: usize) -> Result<(TransferResult<T>, Report)> {
    let nu = crate::hierarchies::dirac_solution::<T>(g, set, r + 2)?;
    transfer_report(g, &nu, r, &T::zero())
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::graph::{cycle, empty};
    use crate::hierarchies::dirac_solution;
    use crate::scalar::rat;

    #[test]
    fn phi_of_dirac_pair() {
        let g = empty(2).unwrap();
        let nu: MeasureVector<BigRational> = dirac_solution(&g, VertexSet::from_vertices(&[0, 1]), 3).unwrap();
        let phi = phi_moments(&g, &nu, 3).unwrap();
        assert_eq!(phi, vec![rat(1, 1), rat(2, 1), rat(4, 1), rat(8, 1)]);
        let delta: MeasureVector<BigRational> = dirac_solution(&g, VertexSet::EMPTY, 2).unwrap();
        assert_eq!(phi_moments(&g, &delta, 2).unwrap(), vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn moment_check_examples() {
        let ok = moment_psd_check(&[rat(1, 1), rat(2, 1), rat(4, 1), rat(8, 1)], 1, &rat(0, 1)).unwrap();
        assert!(ok.pass);
        assert_eq!(ok.get("moment_det[0]").unwrap().slack, 0.0);
        let bad = moment_psd_check(&[1.0, 2.0, 3.0], 0, &0.0).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.get("moment_det[0]").unwrap().lhs, -1.0);
        assert!(moment_psd_check(&[1.0, 2.0], 0, &0.0).is_err());
    }

    #[test]
    fn dirac_transfer_is_exact() {
        let g = cycle(5).unwrap();
        let (res, report) = dirac_transfer::<BigRational>(&g, VertexSet::from_vertices(&[0, 2]), 1).unwrap();
        assert!(report.pass, "{}", report.to_json());
        let total = res.alpha.iter().flatten().fold(rat(0, 1), |a, b| a + b);
        assert_eq!(total, rat(2, 1));
    }

    #[test]
    fn doubled_measure_fails_the_objective_check() {
        let g = empty(2).unwrap();
        let mut nu: MeasureVector<BigRational> = dirac_solution(&g, VertexSet::from_vertices(&[0, 1]), 3).unwrap();
        for v in nu.values.iter_mut() {
            *v = v.clone() * rat(2, 1);
        }
        let res = transfer(&g, &nu, 1, &rat(0, 1)).unwrap();
        let rep = verify_transfer(&g, 1, &res, &nu, &rat(0, 1)).unwrap();
        assert!(rep.get("alpha_diagonal_one").unwrap().pass);
        assert!(!rep.get("alpha_total_vs_objective").unwrap().pass);
    }

    #[test]
    fn degenerate_measure_rejected() {
        let g = cycle(5).unwrap();
        let nu: MeasureVector<BigRational> = dirac_solution(&g, VertexSet::EMPTY, 3).unwrap();
        assert!(matches!(transfer(&g, &nu, 1, &rat(0, 1)), Err(CoreError::Degenerate(_))));
    }

    #[test]
    fn mu_rejects_t_above_r() {
        let g = cycle(5).unwrap();
        let nu: MeasureVector<f64> = dirac_solution(&g, VertexSet::singleton(0), 3).unwrap();
        assert!(mu_matrix(&g, &nu, 1, 2).is_err());
    }
}
