//! Phase transition of number detection: random instances scattered in the
//! (log SRF, log SNR) plane separate into success and failure regions along
//! lines of slope 2n - 2.
//!
//! Run with `cargo run --release --example phase_transition`. Pass an output
//! prefix to also write the CSV log and a gnuplot script:
//! `cargo run --release --example phase_transition -- /tmp/phase`.

use line_spectra::experiments::{
    fit_separating_lines, phase_plot_script, records_to_csv, run_phase_transition,
    AmplitudeRule, SweepConfig,
};

fn main() {
    let prefix = std::env::args().nth(1);
    for (n, d_min_range, seed) in [(2usize, (0.1, 2.0), 0u64), (4, (0.02, 1.0), 1)] {
        let config = SweepConfig {
            n,
            trial_count: 2000,
            d_min_range,
            sigma_range: (1e-12, 3e-1),
            omega: 1.0,
            amplitude_rule: AmplitudeRule::UnitModulusRandomPhase,
            seed,
            m_samples: None,
        };
        let records = run_phase_transition(&config).expect("sweep runs");
        let successes = records.iter().filter(|r| r.success).count();
        let slope = 2.0 * n as f64 - 2.0;
        let fit = fit_separating_lines(&records, slope).expect("both classes present");
        println!(
            "n = {n}: {successes}/{} successes; slope-{slope} band \
             [{:.3}, {:.3}], misclassified {} after 1% trim",
            records.len(),
            fit.intercept_fail,
            fit.intercept_success,
            fit.misclassified
        );
        if let Some(prefix) = &prefix {
            let csv_path = format!("{prefix}_n{n}.csv");
            let gp_path = format!("{prefix}_n{n}.gp");
            std::fs::write(&csv_path, records_to_csv(&records)).expect("write CSV");
            std::fs::write(&gp_path, phase_plot_script(&csv_path, &fit)).expect("write script");
            println!("  wrote {csv_path} and {gp_path} (render with: gnuplot {gp_path})");
        }
    }
}
