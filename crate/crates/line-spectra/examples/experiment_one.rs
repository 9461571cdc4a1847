//! Four-spike number detection: spikes at -1/2, 0, 1/2, 1 with amplitudes
//! (1, -1, -1, 1), twenty samples on [-1, 1], noise level 1e-7.
//!
//! Run with `cargo run --example experiment_one`.

use line_spectra::experiments::run_experiment_1_seeded;

fn main() {
    for seed in [0u64, 1, 2] {
        let result = run_experiment_1_seeded(seed).expect("experiment runs");
        println!("seed {seed}: detected n = {}", result.n_detected);
        println!("  s | count | leading singular values vs threshold");
        for pass in &result.per_s {
            let shown: Vec<String> = pass
                .spectrum
                .values()
                .iter()
                .take(5)
                .map(|v| format!("{v:.3e}"))
                .collect();
            println!(
                "  {} |   {}   | [{}] thr {:.3e}",
                pass.s,
                pass.n,
                shown.join(", "),
                pass.spectrum.threshold
            );
        }
    }
}
