use kpoint_conic::SolverOptions;
use kpoint_core::copositive::*;
use kpoint_core::graph::cycle;
use kpoint_core::hierarchies::{solve_xi_dual, LpMode, XiForm};
use proptest::prelude::*;

#[test]
fn pentagon_pipeline() {
    let g = cycle(5).unwrap();
    let (f, frep) = find_f(&g, 1.0, &SolverOptions::default()).unwrap();
    assert!(frep.pass, "{}", frep.to_json());
    let (z0, zrep) = build_z0(&g, &f, DEFAULT_THETA).unwrap();
    assert!(zrep.pass, "{}", zrep.to_json());
    let level = min_r(&z0, DEFAULT_RCAP, CertMode::Exact, 0.0).unwrap();
    eprintln!("Z0 level {:?}", level.level);
    let r = level.level.expect("within cap");
    assert_eq!(r, 4);
    assert_eq!(level.next_level_member, Some(true));
    assert!(revalidate_by_tuples(&z0, r, CertMode::Exact, 0.0).unwrap().1);
    assert!(!revalidate_by_tuples(&z0, r - 1, CertMode::Exact, 0.0).unwrap().1);
}

#[test]
fn boundary_kernel_needs_level_seven() {
    // The trace-minimal kernel without margin sits on the PSD boundary.
    let g = cycle(5).unwrap();
    let (f, frep) = find_f(&g, 0.0, &SolverOptions::default()).unwrap();
    assert!(frep.pass);
    let (z0, _) = build_z0(&g, &f, DEFAULT_THETA).unwrap();
    assert_eq!(min_r(&z0, 6, CertMode::Exact, 0.0).unwrap().level, None);
    assert_eq!(min_r(&z0, 7, CertMode::Exact, 0.0).unwrap().level, Some(7));
}

#[test]
fn perturbing_a_dual_witness() {
    let g = cycle(5).unwrap();
    let xi = solve_xi_dual(&g, 3, XiForm::Multiset, LpMode::Exact, &SolverOptions::default(), 1e-6).unwrap();
    let z = xi.z.unwrap();
    let (f, _) = find_f(&g, 1.0, &SolverOptions::default()).unwrap();
    let (z0, _) = build_z0(&g, &f, DEFAULT_THETA).unwrap();
    let rep = perturb_certify(&g, &z, xi.lambda, &z0, lambda_for(&z0), 0.1, 6, CertMode::Exact, 1e-6).unwrap();
    assert!(rep.checks.pass, "{}", rep.checks.to_json());
    eprintln!("W level {:?}", rep.min_level.level);
    assert!(rep.min_level.level.is_some_and(|r| r <= 3));
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(-3i32..=6, n * (n + 1) / 2).prop_map(move |v| {
            let mut z = vec![vec![0.0; n]; n];
            let mut it = v.into_iter();
            for i in 0..n {
                for j in i..n {
                    let x = it.next().unwrap() as f64;
                    z[i][j] = x;
                    z[j][i] = x;
                }
            }
            z
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cone_levels_are_nested(z in small_matrix(), r in 0usize..=3) {
        if cr_membership(&z, r, CertMode::Exact, 0.0).unwrap().verdict == Verdict::Member {
            prop_assert_eq!(cr_membership(&z, r + 1, CertMode::Exact, 0.0).unwrap().verdict, Verdict::Member);
        }
    }

    #[test]
    fn verdicts_agree_with_tuple_enumeration(z in small_matrix(), r in 0usize..=3) {
        prop_assume!(z.len() <= 3);
        let c = cr_membership(&z, r, CertMode::Exact, 0.0).unwrap();
        let (_, ok) = revalidate_by_tuples(&z, r, CertMode::Exact, 0.0).unwrap();
        prop_assert_eq!(c.verdict == Verdict::Member, ok);
        if c.verdict == Verdict::NonMember {
            prop_assert!(multiset_sum(&z, &c.worst_multiset, CertMode::Exact) < 0.0);
        }
    }

    #[test]
    fn members_are_copositive(z in small_matrix(), r in 0usize..=3, ys in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 4), 1000)) {
        prop_assume!(cr_membership(&z, r, CertMode::Exact, 0.0).unwrap().verdict == Verdict::Member);
        for y in &ys {
            prop_assert!(quadratic_form(&z, &y[..z.len()]) >= -1e-9);
        }
    }
}
