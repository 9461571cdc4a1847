//! End-to-end tests of the `line-spectra` binary: exit codes, file
//! round-trips, atomic output, and seed reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_line-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn experiment_one_prints_detection() {
    let out = run(&["experiment1"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(value["n_detected"], 4);
}

#[test]
fn synth_then_detect_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let measure_path = dir.path().join("mu.json");
    std::fs::write(
        &measure_path,
        r#"{"supports": [-0.5, 0.0, 0.5, 1.0],
            "amplitudes_re": [1.0, -1.0, -1.0, 1.0],
            "amplitudes_im": [0.0, 0.0, 0.0, 0.0]}"#,
    )
    .unwrap();
    let meas_path = dir.path().join("meas.json");
    let out = run(&[
        "synth",
        "--measure",
        measure_path.to_str().unwrap(),
        "--omega",
        "1.0",
        "--m",
        "20",
        "--sigma",
        "1e-7",
        "--out",
        meas_path.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(meas_path.exists());

    let out = run(&["detect", "--input", meas_path.to_str().unwrap()]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(value["n_detected"], 4);
    let per_s = value["per_s"].as_array().unwrap();
    assert_eq!(per_s.len(), 9);
    for entry in per_s {
        assert!(entry["s"].is_number());
        assert!(entry["singular_values"].is_array());
        assert!(entry["threshold"].is_number());
        assert!(entry["n"].is_number());
    }

    // Fixed-size detection at s = 4.
    let out = run(&["detect", "--input", meas_path.to_str().unwrap(), "--s", "4"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(value["per_s"].as_array().unwrap().len(), 1);
    assert_eq!(value["n_detected"], 4);

    // Overriding the declared noise level swamps the small singular values.
    let out = run(&["detect", "--input", meas_path.to_str().unwrap(), "--sigma", "0.5"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(value["n_detected"].as_u64().unwrap() < 4);
}

#[test]
fn detect_missing_input_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("result.json");
    let out = run(&[
        "detect",
        "--input",
        dir.path().join("missing.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists(), "no partial output may be written");
}

#[test]
fn synth_is_reproducible_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let measure_path = dir.path().join("mu.json");
    std::fs::write(
        &measure_path,
        r#"{"supports": [0.0, 0.4], "amplitudes_re": [1.0, 1.0], "amplitudes_im": [0.0, 0.0]}"#,
    )
    .unwrap();
    let synth = |seed: &str, name: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let out = run(&[
            "synth",
            "--measure",
            measure_path.to_str().unwrap(),
            "--omega",
            "2.0",
            "--m",
            "11",
            "--sigma",
            "1e-4",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    let a = synth("7", "a.json");
    let b = synth("7", "b.json");
    let c = synth("8", "c.json");
    assert_eq!(a, b, "same seed must be byte-identical");
    assert_ne!(a, c, "different seeds must differ");
}

#[test]
fn verify_appendix_reports_all_hold() {
    let out = run(&["verify", "--appendix", "--n-max", "30"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut count = 0;
    for line in text.lines() {
        let report: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(report["holds"], true, "failing check: {line}");
        assert!(report["check"].is_string());
        assert!(report["lhs"].is_number());
        assert!(report["rhs"].is_number());
        count += 1;
    }
    // Eight inequality checks for each n in 2..=30.
    assert_eq!(count, 29 * 8);
}

#[test]
fn verify_section3_runs_quick_sweeps() {
    let out = run(&["verify", "--section3", "--configs", "6", "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    assert!(text.lines().count() >= 6);
    for line in text.lines() {
        let report: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(report["holds"], true);
    }
}

#[test]
fn worstcase_emits_pair_with_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    let out = run(&[
        "worstcase",
        "--kind",
        "support",
        "--n",
        "3",
        "--omega",
        "1.0",
        "--sigma",
        "1e-5",
        "--mmin",
        "1.0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["kind"], "support");
    assert_eq!(value["mu"]["supports"].as_array().unwrap().len(), 3);
    assert_eq!(value["mu_hat"]["supports"].as_array().unwrap().len(), 3);
    assert!(value["tau"].as_f64().unwrap() > 0.0);
    assert!(value["verification"]["sup_dense_grid"].as_f64().unwrap() < 1e-5);
    assert_eq!(value["verification"]["admissible_on_sample_grid"], true);
}

#[test]
fn worstcase_invalid_params_exit_2() {
    let out = run(&[
        "worstcase", "--kind", "number", "--n", "1", "--omega", "1.0", "--sigma", "1e-5",
        "--mmin", "1.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_and_plot_script_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("sweep.json");
    std::fs::write(
        &config_path,
        r#"{"n": 2, "trial_count": 60, "d_min_range": [0.1, 2.0],
            "sigma_range": [1e-10, 0.3], "omega": 1.0,
            "amplitude_rule": "unit_modulus_random_phase", "seed": 13}"#,
    )
    .unwrap();
    let csv_path = dir.path().join("trials.csv");
    let gp_path = dir.path().join("plot.gp");
    let args = [
        "sweep",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
        "--plot-script",
        gp_path.to_str().unwrap(),
    ];
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial_id,n_true,n_detected,d_min,sigma,m_min,omega,log_srf,log_snr,seed,success"
    );
    assert_eq!(lines.count(), 60);

    let gp = std::fs::read_to_string(&gp_path).unwrap();
    assert!(gp.contains(csv_path.to_str().unwrap()));
    assert!(gp.contains("success_line"));

    // Byte-identical on rerun.
    let first = std::fs::read(&csv_path).unwrap();
    let out = run(&args);
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&csv_path).unwrap());

    // CSV floats round-trip exactly.
    let line = csv.lines().nth(1).unwrap();
    let d_min: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(format!("{:.16e}", d_min), line.split(',').nth(3).unwrap());
}

#[test]
fn sweep_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("sweep.json");
    std::fs::write(
        &config_path,
        r#"{"n": 2, "trial_count": 0, "d_min_range": [0.1, 2.0],
            "sigma_range": [1e-10, 0.3], "omega": 1.0,
            "amplitude_rule": "unit_modulus_random_phase", "seed": 13}"#,
    )
    .unwrap();
    let csv_path = dir.path().join("trials.csv");
    let out = run(&[
        "sweep",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!csv_path.exists());
}

#[test]
fn figure1_emits_tau_table() {
    let out = run(&["figure1", "--tau-step", "0.2", "--sigma", "1e-7"]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(rows.len(), 5);
    let last = rows.last().unwrap();
    assert!((last["tau"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(last["n_detected"], 4);
}

#[test]
fn help_lists_all_subcommands() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    for sub in ["synth", "detect", "worstcase", "verify", "sweep", "experiment1", "figure1"] {
        assert!(text.contains(sub), "missing {sub} in help");
    }
}

#[test]
fn output_paths_in_current_directory_work() {
    // Regression guard for the atomic-write parent-directory handling.
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["experiment1", "--out", "result.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(Path::new(dir.path()).join("result.json").exists());
}
