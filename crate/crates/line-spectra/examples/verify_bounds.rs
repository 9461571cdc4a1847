//! Certify the approximation-theory inequalities numerically: factorial
//! estimates in the log domain plus randomized feasible-point checks of the
//! Vandermonde residual bounds.
//!
//! Run with `cargo run --release --example verify_bounds`.

use line_spectra::bounds::{
    check_appendix_inequalities, sweep_eta_stability, sweep_min_eta, sweep_nonlinear_approx,
    sweep_residual_lower_bound, sweep_eta_from_residual, BoundCheckReport,
};

fn summarize(name: &str, reports: &[BoundCheckReport]) {
    let holding = reports.iter().filter(|r| r.holds).count();
    let evals: u64 = reports.iter().map(|r| r.oracle_evaluations).sum();
    println!(
        "{name:<28} {holding}/{} hold ({evals} oracle evaluations)",
        reports.len()
    );
    for r in reports.iter().filter(|r| !r.holds) {
        println!("  FAILED: {} at {}: lhs {} rhs {}", r.check, r.config, r.lhs, r.rhs);
    }
}

fn main() {
    let appendix = check_appendix_inequalities(2, 30).expect("valid range");
    summarize("factorial inequalities", &appendix);

    summarize(
        "projection residual bound",
        &sweep_residual_lower_bound(50, 1).expect("sweep"),
    );
    summarize("min-eta lower bound", &sweep_min_eta(20, 3, 2).expect("sweep"));
    summarize(
        "nonlinear approx bound",
        &sweep_nonlinear_approx(10, 3).expect("sweep"),
    );
    summarize(
        "eta-from-residual bound",
        &sweep_eta_from_residual(50, 4).expect("sweep"),
    );
    summarize("eta stability matching", &sweep_eta_stability(20, 5).expect("sweep"));
}
