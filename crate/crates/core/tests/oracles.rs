mod common;

use common::*;

#[test]
fn leakage_direction_is_never_beaten_by_random_search() {
    let report = lbf_against_random(60, 100_000, 3, 11);
    assert_eq!(report.beaten, 0, "{report:?}");
    assert!(
        report.worst_ratio > 0.9,
        "search too weak to mean anything: {report:?}"
    );
}

#[test]
fn opa_matches_the_barrier_solver() {
    let report = opa_against_barrier(&allocation_instances(60, 5));
    assert_eq!(report.failures, 0);
    assert!(report.worst_gap < 1e-4, "{report:?}");
    assert!(report.worst_kkt < 1e-6, "{report:?}");
}

#[test]
fn barrier_solver_agrees_with_a_closed_form() {
    // One cap and equal weights: water-filling with a known level.
    let p = coopbeam::power_allocation::AllocationProblem::new(
        vec![1.0, 4.0],
        nalgebra::DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
        vec![2.0],
        vec![1.0, 1.0],
    )
    .unwrap();
    // alpha_k = mu - 1/g_k with sum 2: mu = (2 + 1 + 0.25) / 2
    let alpha = barrier_allocation(&p);
    assert!((alpha[0] - 0.625).abs() < 1e-8, "{alpha:?}");
    assert!((alpha[1] - 1.375).abs() < 1e-8, "{alpha:?}");
}

#[test]
fn overlap_matches_measured_symbol_correlation() {
    assert!(beta_deviation(100, 200_000, 3) < 0.02);
}

#[test]
fn analytic_interference_matches_the_sampled_waveform() {
    let report = analytic_against_waveform(8, 100_000, 9);
    assert!(report.worst_relative_error < 0.03, "{report:?}");
}
