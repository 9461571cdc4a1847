//! How close can four spikes get before the detector loses them? Spikes at
//! (-tau, 0, tau, 2 tau), noise level 1e-7, tau swept over a 0.01 grid.
//!
//! Run with `cargo run --release --example separation_sweep`.

use line_spectra::experiments::run_separation_sweep;

fn main() {
    let taus: Vec<f64> = (1..=100).map(|i| i as f64 * 0.01).collect();
    let results = run_separation_sweep(&taus, 1e-7, 0).expect("sweep runs");

    // Smallest tau from which detection stays at 4 for the rest of the grid.
    let mut onset = None;
    for &(tau, n) in results.iter().rev() {
        if n == 4 {
            onset = Some(tau);
        } else {
            break;
        }
    }

    println!("tau    detected");
    for &(tau, n) in results.iter().step_by(5) {
        let marker = if n == 4 { "****" } else { "" };
        println!("{tau:<6.2} {n} {marker}");
    }
    match onset {
        Some(t) => println!("\npersistent success from tau = {t:.2} onward"),
        None => println!("\nno persistent success region on this grid"),
    }
}
