//! Worst-case instances at the resolution limit: pairs of measures with
//! different support counts (or disjoint supports) whose sampled data differ
//! by less than the noise level everywhere, so no detector can tell them
//! apart without extra priors.
//!
//! Run with `cargo run --example adversarial_pairs`.

use line_spectra::measure::{fourier_samples, is_sigma_admissible, Measurement, SamplingGrid};
use line_spectra::worst_case::{construct_number_instance, construct_support_instance};

fn main() {
    let (omega, sigma, m_min) = (1.0, 1e-5, 1.0);
    for n in 2..=5 {
        let number = construct_number_instance(n, omega, sigma, m_min).expect("construction");
        let support = construct_support_instance(n, omega, sigma, m_min).expect("construction");
        println!("n = {n}:");
        println!(
            "  number pair: {} vs {} supports, spacing tau = {:.4e}",
            number.mu.len(),
            number.mu_hat.len(),
            number.tau
        );
        println!(
            "    sup |data gap| = {:.3e} < sigma = {sigma:.1e} (tail bound {:.3e})",
            number.verification.sup_dense_grid, number.verification.taylor_tail_bound
        );
        println!(
            "  support pair: supports {:?} vs {:?} (tau = {:.4e})",
            rounded(number_supports(support.mu.supports(), support.tau)),
            rounded(number_supports(support.mu_hat.supports(), support.tau)),
            support.tau
        );

        // The short measure explains the long measure's data at noise level
        // sigma on any sampling grid inside [-omega, omega].
        let grid = SamplingGrid::new(omega, 64).expect("grid");
        let data = Measurement::new(
            fourier_samples(&number.mu, &grid),
            grid,
            sigma,
            None,
        )
        .expect("measurement");
        assert!(is_sigma_admissible(&number.mu_hat, &data));
        println!("    the (n-1)-spike measure is sigma-admissible for the n-spike data");
    }
}

/// Supports in units of tau, for readable printing.
fn number_supports(supports: &[f64], tau: f64) -> Vec<f64> {
    supports.iter().map(|y| y / tau).collect()
}

fn rounded(xs: Vec<f64>) -> Vec<f64> {
    xs.into_iter().map(|x| (x * 100.0).round() / 100.0).collect()
}
