mod common;

use kpoint_conic::sdpa::export_sdpa;
use kpoint_core::graph::{cycle, petersen};
use kpoint_core::hierarchies::{build_delta, DeltaForm};

#[test]
fn delta_2_agrees_with_external_solver() {
    for (g, expect) in [(cycle(5).unwrap(), 5f64.sqrt()), (petersen(), 4.0)] {
        let dp = build_delta(&g, 2, DeltaForm::Full).unwrap();
        match common::external_value(&export_sdpa(&dp.program), "delta2") {
            Some(v) => assert!((v - expect).abs() < 1e-4, "external value {v}, expected {expect}"),
            None => eprintln!("skipped: python3 with cvxpy not available"),
        }
    }
}
