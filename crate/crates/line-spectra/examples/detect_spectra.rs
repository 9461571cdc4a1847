//! Build a measure, sample it with bounded noise, and detect the number of
//! spectra — fixed matrix size first, then the full sweep.
//!
//! Run with `cargo run --example detect_spectra`.

use line_spectra::detection::{detect_at_s_detailed, detect_count_sweep, min_singular_lower_bound};
use line_spectra::measure::{synthesize_measurement, DiscreteMeasure, SamplingGrid, srf_snr};
use num_complex::Complex64;

fn main() {
    // Three spikes inside the cluster interval, one of them weak.
    let mu = DiscreteMeasure::new(
        vec![-0.9, 0.1, 1.2],
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, -0.8),
            Complex64::new(0.4, 0.3),
        ],
    )
    .expect("valid measure");
    let omega = 1.0;
    let sigma = 1e-6;
    let grid = SamplingGrid::new(omega, 25).expect("valid grid");
    let y = synthesize_measurement(&mu, &grid, sigma, 42).expect("synthesis");

    let (srf, snr) = srf_snr(&mu, &grid, sigma).expect("n >= 2");
    println!("instance: n = {}, SRF = {srf:.3}, SNR = {snr:.3e}", mu.len());

    let s = mu.len();
    let pass = detect_at_s_detailed(&y, s).expect("detection");
    println!("\nfixed s = {s}: detected {}", pass.n);
    for (j, v) in pass.spectrum.values().iter().enumerate() {
        let side = if *v > pass.spectrum.threshold { ">" } else { "<=" };
        println!("  sigma_hat_{} = {v:.6e} {side} threshold {:.3e}", j + 1, pass.spectrum.threshold);
    }
    let floor = min_singular_lower_bound(&mu, omega, s).expect("bound");
    println!("  noiseless sigma_n floor from the separation: {floor:.3e}");

    let sweep = detect_count_sweep(&y).expect("sweep");
    println!("\nsweep over s = 1..={}: detected {}", sweep.s_range_used.1, sweep.n_detected);
    for pass in &sweep.per_s {
        println!("  s = {}: count {}", pass.s, pass.n);
    }
}
