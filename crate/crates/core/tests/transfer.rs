use kpoint_conic::SolverOptions;
use kpoint_core::graph::{alpha_exact, cycle, empty, gnp, max_independent_set, petersen, Graph};
use kpoint_core::hierarchies::{dirac_solution, solve_delta, MeasureVector};
use kpoint_core::identities::{all_graphs, dirac_suite, sample_measure};
use kpoint_core::scalar::rat;
use kpoint_core::transfer::*;
use num_rational::BigRational;
use proptest::prelude::*;

fn witness_transfers(g: &Graph, k: usize) {
    let d = solve_delta(g, k, &SolverOptions::default(), 1e-6).unwrap();
    assert!(d.verification.pass, "{}", d.verification.to_json());
    let (res, report) = transfer_report(g, &d.witness, k - 2, &1e-6).unwrap();
    assert!(report.pass, "{}", report.to_json());
    let total: f64 = res.alpha.iter().flatten().sum();
    assert!(total >= d.value - 1e-6, "{total} < {}", d.value);
}

#[test]
fn solver_witnesses_on_c5() {
    witness_transfers(&cycle(5).unwrap(), 3);
    witness_transfers(&cycle(5).unwrap(), 4);
}

#[test]
fn solver_witnesses_on_random_graphs() {
    for seed in 0..6u64 {
        let g = gnp(6, 0.4, seed).unwrap();
        if g.num_edges() == 0 {
            continue;
        }
        witness_transfers(&g, 3);
    }
}

#[test]
fn dirac_suite_on_small_graphs() {
    let mut graphs: Vec<Graph> = (1..=4).flat_map(all_graphs).collect();
    graphs.push(cycle(5).unwrap());
    let report = dirac_suite(&graphs, 3, 2).unwrap();
    assert!(report.pass, "{:?}", report.failed().next());
}

#[test]
fn dirac_alpha_is_uniform_on_the_set() {
    let g = petersen();
    let set = max_independent_set(&g);
    let (res, report) = dirac_transfer::<BigRational>(&g, set, 2).unwrap();
    assert!(report.pass);
    let s = set.len() as i64;
    for x in 0..g.n() {
        for y in 0..g.n() {
            let expect = if set.contains(x) && set.contains(y) { rat(1, s) } else { rat(0, 1) };
            assert_eq!(res.alpha[x][y], expect, "({x},{y})");
        }
    }
    // Φ_t = |S|^t for the Dirac measure.
    assert_eq!(res.phi, (0..=4).map(|t| rat(s.pow(t), 1)).collect::<Vec<_>>());
}

#[test]
fn degenerate_inputs_are_rejected() {
    let g = empty(3).unwrap();
    let nu: MeasureVector<BigRational> = dirac_solution(&g, kpoint_core::VertexSet::EMPTY, 2).unwrap();
    assert!(transfer(&g, &nu, 0, &rat(0, 1)).is_err());
    let nu2: MeasureVector<BigRational> = dirac_solution(&g, kpoint_core::VertexSet::singleton(0), 3).unwrap();
    assert!(transfer(&g, &nu2, 0, &rat(0, 1)).is_err());
    assert!(mu_matrix(&g, &nu2, 1, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dirac_measures_transfer_exactly(n in 1usize..=6, p in 0.0f64..=1.0, seed in any::<u64>(), r in 0usize..=2) {
        let g = gnp(n, p, seed).unwrap();
        let set = max_independent_set(&g);
        let (res, report) = dirac_transfer::<BigRational>(&g, set, r).unwrap();
        prop_assert!(report.pass, "{}", report.to_json());
        let total = res.alpha.iter().flatten().fold(rat(0, 1), |a, b| a + b);
        prop_assert_eq!(total, rat(alpha_exact(&g) as i64, 1));
    }

    #[test]
    fn alpha_total_is_moment_ratio(n in 1usize..=5, p in 0.0f64..=1.0, seed in any::<u64>(), r in 0usize..=2) {
        let g = gnp(n, p, seed).unwrap();
        let nu = sample_measure(&g, r + 2).unwrap();
        let res = transfer(&g, &nu, r, &rat(0, 1)).unwrap();
        let total = res.alpha.iter().flatten().fold(rat(0, 1), |a, b| a + b);
        prop_assert_eq!(total, res.phi[r + 2].clone() / res.phi[r + 1].clone());
        let diag = (0..n).fold(rat(0, 1), |a, x| a + res.alpha[x][x].clone());
        prop_assert_eq!(diag, rat(1, 1));
    }
}
