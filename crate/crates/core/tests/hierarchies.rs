use kpoint_conic::{SolverOptions, Status};
use kpoint_core::graph::{alpha_exact, complete, cycle, empty, petersen, VertexSet};
use kpoint_core::hierarchies::*;
use kpoint_core::scalar::rat;
use num_rational::BigRational;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn delta_program_shapes() {
    let c5 = cycle(5).unwrap();
    let full = build_delta(&c5, 2, DeltaForm::Full).unwrap();
    let kinds: Vec<String> = full.program.blocks().iter().map(|b| format!("{b:?}")).collect();
    assert_eq!(kinds, vec!["Psd(6)", "Diagonal(11)"]);
    let full3 = build_delta(&c5, 3, DeltaForm::Full).unwrap();
    assert_eq!(full3.program.blocks().iter().filter(|b| format!("{b:?}") == "Psd(6)").count(), 6);
    // M_∅({0},{1}) has no variable: 0 and 1 are adjacent.
    let has = full.program.constraints().iter().any(|c| c.coeffs.entries().iter().any(|e| e.block == 0 && e.i == 1 && e.j == 2));
    assert!(!has);
}

#[test]
fn delta_values_on_c5() {
    let c5 = cycle(5).unwrap();
    let d2 = solve_delta(&c5, 2, &opts(), 1e-6).unwrap();
    assert_eq!(d2.status, Status::Optimal);
    assert!((d2.value - 5f64.sqrt()).abs() < 1e-6, "{}", d2.value);
    assert!(d2.verification.pass, "{}", d2.verification.to_json());
    assert!(d2.residuals.pass);
    let d3 = solve_delta(&c5, 3, &opts(), 1e-6).unwrap();
    assert!((d3.value - 2.0).abs() < 1e-6, "{}", d3.value);
    assert!(d3.verification.pass);
    let d4 = solve_delta(&c5, 4, &opts(), 1e-6).unwrap();
    assert!((d4.value - 2.0).abs() < 1e-6, "{}", d4.value);
}

#[test]
fn delta_2_of_petersen() {
    let d = solve_delta(&petersen(), 2, &opts(), 1e-6).unwrap();
    assert!((d.value - 4.0).abs() < 1e-6, "{}", d.value);
}

#[test]
fn xi_values_on_c5() {
    let c5 = cycle(5).unwrap();
    let expect = [f64::INFINITY, 3.0, 3.0, 2.5];
    for (r, &e) in expect.iter().enumerate() {
        let d = solve_xi_dual(&c5, r, XiForm::Multiset, LpMode::Exact, &opts(), 1e-6).unwrap();
        assert_eq!(d.value, e, "xi*_{r}");
        assert!(d.verification.pass, "{}", d.verification.to_json());
        let p = solve_xi_primal(&c5, r, XiForm::Multiset, LpMode::Exact, &opts(), 1e-6).unwrap();
        assert_eq!(p.value, e, "xi_{r}");
        assert!(p.verification.pass, "{}", p.verification.to_json());
    }
}

#[test]
fn xi_float_matches_exact() {
    let c5 = cycle(5).unwrap();
    for r in 0..=3 {
        let a = solve_xi_dual(&c5, r, XiForm::Multiset, LpMode::Exact, &opts(), 1e-6).unwrap();
        let b = solve_xi_dual(&c5, r, XiForm::Multiset, LpMode::Float, &opts(), 1e-6).unwrap();
        assert!(a.value == b.value || (a.value - b.value).abs() < 1e-6, "r={r}: {} vs {}", a.value, b.value);
        assert!(b.verification.pass || !b.feasible, "{}", b.verification.to_json());
    }
}

#[test]
fn xi_dual_program_has_126_cone_rows_at_r3() {
    let p = build_xi_dual(&cycle(5).unwrap(), 3, XiForm::Multiset).unwrap();
    // 5 diagonal rows, 5 non-edge rows, C(9,5) cone rows.
    assert_eq!(p.blocks()[0].size(), 5 + 5 + 126);
}

#[test]
fn complete_graphs_give_one() {
    for n in 2..=4 {
        let g = complete(n).unwrap();
        for r in 0..=2 {
            let d = solve_xi_dual(&g, r, XiForm::Multiset, LpMode::Exact, &opts(), 1e-6).unwrap();
            assert_eq!(d.value, 1.0);
            let p = solve_xi_primal(&g, r, XiForm::Multiset, LpMode::Exact, &opts(), 1e-6).unwrap();
            assert_eq!(p.value, 1.0);
            let alpha = p.alpha.unwrap();
            assert!((0..n).all(|x| (0..n).all(|y| x == y || alpha[x][y] == 0.0)));
        }
        let d = solve_delta(&g, 2, &opts(), 1e-6).unwrap();
        assert!((d.value - 1.0).abs() < 1e-6);
    }
}

#[test]
fn dirac_examples() {
    let e2 = empty(2).unwrap();
    let nu: MeasureVector<BigRational> = dirac_solution(&e2, VertexSet::from_vertices(&[0, 1]), 2).unwrap();
    assert_eq!(nu.values.iter().filter(|v| **v == rat(1, 1)).count(), 4);
    assert_eq!(singleton_mass(&e2, &nu), rat(2, 1));
    let c5 = cycle(5).unwrap();
    let nu: MeasureVector<BigRational> = dirac_solution(&c5, VertexSet::from_vertices(&[0, 2]), 3).unwrap();
    assert!(verify_delta_feasible(&c5, 3, &nu, &rat(0, 1)).unwrap().pass);
    assert_eq!(singleton_mass(&c5, &nu), rat(2, 1));
    let empty_set: MeasureVector<BigRational> = dirac_solution(&c5, VertexSet::EMPTY, 2).unwrap();
    assert_eq!(singleton_mass(&c5, &empty_set), rat(0, 1));
    assert!(dirac_solution::<f64>(&c5, VertexSet::from_vertices(&[0, 1]), 2).is_err());
}

#[test]
fn negated_entry_fails_nonnegativity() {
    let c5 = cycle(5).unwrap();
    let mut nu: MeasureVector<BigRational> = dirac_solution(&c5, VertexSet::from_vertices(&[1, 3]), 2).unwrap();
    nu.values[2] = -nu.values[2].clone();
    let rep = verify_delta_feasible(&c5, 2, &nu, &rat(0, 1)).unwrap();
    assert!(!rep.get("nonnegative").unwrap().pass);
}

#[test]
fn restriction_of_witness_stays_feasible() {
    let c5 = cycle(5).unwrap();
    let d3 = solve_delta(&c5, 3, &opts(), 1e-6).unwrap();
    let nu2 = restrict(&c5, &d3.witness, 2).unwrap();
    assert!(verify_delta_feasible(&c5, 2, &nu2, &1e-6).unwrap().pass);
    assert_eq!(singleton_mass(&c5, &nu2), singleton_mass(&c5, &d3.witness));
}

#[test]
fn stabilized_programs_coincide() {
    let c5 = cycle(5).unwrap();
    assert_eq!(alpha_exact(&c5), 2);
    let a = build_delta(&c5, 4, DeltaForm::Reduced).unwrap();
    let b = build_delta(&c5, 6, DeltaForm::Reduced).unwrap();
    assert_eq!(a.program, b.program);
}

#[test]
fn sweep_on_c5() {
    let t = hierarchy_sweep(&cycle(5).unwrap(), 4, 2, &SweepOptions::default()).unwrap();
    assert!(t.checks.pass, "{}", t.checks.to_json());
    assert_eq!(t.alpha, 2);
}
