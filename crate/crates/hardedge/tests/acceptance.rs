//! The acceptance suite: one test per numbered check, each printing its
//! one-line report (visible with `--nocapture` and echoed on failure).
//!
//! The checks live in `hardedge::verify` so the command-line `verify-all`
//! runs exactly the same code.

use hardedge::verify;

fn run(check: fn() -> hardedge::Result<verify::CriterionReport>) {
    let report = check().unwrap_or_else(|e| panic!("criterion errored: {e}"));
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_01_explicit_pair_identity() {
    run(verify::criterion_1_explicit_pair_identity);
}

#[test]
fn criterion_02_closed_form_vs_pde() {
    run(verify::criterion_2_closed_form_vs_pde);
}

#[test]
fn criterion_03_closed_form_identities() {
    run(verify::criterion_3_closed_form_identities);
}

#[test]
fn criterion_04_coupling2_hard_pairs() {
    run(verify::criterion_4_coupling2_hard_pairs);
}

#[test]
fn criterion_05_coupling4_hard_pair() {
    run(verify::criterion_5_coupling4_hard_pair);
}

#[test]
fn criterion_06_separatrix_solution() {
    run(verify::criterion_6_separatrix_solution);
}

#[test]
fn criterion_07_scaling_limit_pairs() {
    run(verify::criterion_7_scaling_limit_pairs);
}

#[test]
fn criterion_08_convergence_sweep() {
    run(verify::criterion_8_convergence_sweep);
}

#[test]
fn criterion_09_path_independence() {
    run(verify::criterion_9_path_independence);
}

#[test]
fn criterion_10_ensemble_sampler() {
    run(verify::criterion_10_ensemble_sampler);
}

#[test]
fn criterion_11_antidiagonal_identity() {
    run(verify::criterion_11_antidiagonal_identity);
}
