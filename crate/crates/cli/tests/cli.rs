//! End-to-end tests of the `coulosc` binary: golden values, file handling,
//! exit codes, and output determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coulosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write_params(dir: &Path, omega: f64) -> std::path::PathBuf {
    write_params_b0(dir, omega, 1.0)
}

fn write_params_b0(dir: &Path, omega: f64, b0: f64) -> std::path::PathBuf {
    let path = dir.join("params.json");
    std::fs::write(
        &path,
        format!(
            r#"{{"m":1.0,"g":1.0,"b":1.0,"B0":{b0},"k":0.0,"omega":{omega},"l":0,"s":1}}"#
        ),
    )
    .unwrap();
    path
}

#[test]
fn truncate_reports_roots_and_nodes() {
    let json = stdout_json(&run(&["truncate", "--n", "1", "--gamma", "0"]));
    let sols = json["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    let sqrt2 = std::f64::consts::SQRT_2;
    assert!((sols[0]["beta_root"].as_f64().unwrap() - sqrt2).abs() < 1e-9);
    assert!((sols[1]["beta_root"].as_f64().unwrap() + sqrt2).abs() < 1e-9);
    assert_eq!(sols[0]["W_exact"].as_f64().unwrap(), 4.0);
    assert_eq!(sols[0]["node_count"].as_u64().unwrap(), 0);
    assert_eq!(sols[1]["node_count"].as_u64().unwrap(), 1);

    let json = stdout_json(&run(&["truncate", "--n", "2", "--gamma", "0"]));
    let roots: Vec<f64> = json["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["beta_root"].as_f64().unwrap())
        .collect();
    assert!((roots[0] - 3.464101615).abs() < 1e-9);
    assert_eq!(roots[1], 0.0);
    assert!((roots[2] + 3.464101615).abs() < 1e-9);

    // n = 0 at gamma = 3: single zero root, shared eigenvalue 8
    let json = stdout_json(&run(&["truncate", "--n", "0", "--gamma", "3"]));
    let sols = json["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["beta_root"].as_f64().unwrap(), 0.0);
    assert_eq!(sols[0]["W_exact"].as_f64().unwrap(), 8.0);
}

#[test]
fn spectrum_matches_reference_values() {
    let json = stdout_json(&run(&[
        "spectrum",
        "--gamma",
        "0",
        "--beta",
        "1.41421356237",
        "--states",
        "4",
    ]));
    let want = [4.0, 7.693978891, 11.50604238, 15.37592718];
    let got = json["eigenvalues"].as_array().unwrap();
    for (g, w) in got.iter().zip(want) {
        assert!((g.as_f64().unwrap() - w).abs() < 1e-6);
    }
    for e in json["expectation_inv_xi"].as_array().unwrap() {
        assert!(e.as_f64().unwrap() > 0.0);
    }

    let json = stdout_json(&run(&[
        "spectrum", "--gamma", "0", "--beta", "0", "--states", "4",
    ]));
    let got = json["eigenvalues"].as_array().unwrap();
    for (j, g) in got.iter().enumerate() {
        assert!((g.as_f64().unwrap() - (4.0 * j as f64 + 2.0)).abs() < 1e-8);
    }

    let json = stdout_json(&run(&[
        "spectrum", "--gamma", "0", "--beta", "-1", "--states", "4",
    ]));
    assert!((json["eigenvalues"][0].as_f64().unwrap() + 0.2085695649).abs() < 1e-6);
}

#[test]
fn spectrum_csv_uses_the_sweep_row_format() {
    let out = run(&[
        "spectrum", "--gamma", "1", "--beta", "0.5", "--states", "3", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "beta,state_index,W,inv_xi_expectation");
    assert_eq!(lines.count(), 3);
}

#[test]
fn spectrum_output_is_deterministic_modulo_timestamp() {
    let args = ["spectrum", "--gamma", "0", "--beta", "0.75", "--states", "3"];
    let mut a = stdout_json(&run(&args));
    let mut b = stdout_json(&run(&args));
    a.as_object_mut().unwrap().remove("generated_at");
    b.as_object_mut().unwrap().remove("generated_at");
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn json_numbers_carry_full_double_precision() {
    // the JSON payload must reproduce the library values bit for bit
    let json = stdout_json(&run(&[
        "spectrum", "--gamma", "0", "--beta", "0.3", "--states", "2",
    ]));
    let basis = coulosc::variational::BasisSpec::default_for(0.0).unwrap();
    let lib = coulosc::variational::solve_spectrum(&basis, 0.3, 2).unwrap();
    for (a, b) in json["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .zip(&lib.eigenvalues)
    {
        assert_eq!(a.as_f64().unwrap().to_bits(), b.to_bits());
    }
}

#[test]
fn spectrum_accepts_parameter_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_params(dir.path(), 0.5);
    let json = stdout_json(&run(&["spectrum", "--params", path.to_str().unwrap()]));
    // m = 1, omega = 1/2, delta = 1: beta = sqrt(2), whose ground state is
    // the polynomial solution with W = 4
    assert!((json["beta"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
    assert!((json["eigenvalues"][0].as_f64().unwrap() - 4.0).abs() < 1e-6);
}

#[test]
fn truncate_with_params_reports_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_params(dir.path(), 1.0);
    let json = stdout_json(&run(&[
        "truncate", "--n", "1", "--params", path.to_str().unwrap(),
    ]));
    // delta = 1, m = 1, both roots have beta^2 = 2: omega = 1/2
    let freqs = json["frequencies"].as_array().unwrap();
    assert_eq!(freqs.len(), 2);
    for f in freqs {
        assert!((f["omega"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn energies_compose_the_full_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_params(dir.path(), 0.5);
    let json = stdout_json(&run(&[
        "energies", "--params", path.to_str().unwrap(), "--states", "4",
    ]));
    // E_0 = omega W_0 / 2 + (g b B0)^2 / 2m = 0.25 * 4 + 0.5
    let e0 = json["true_energies"][0]["energy"].as_f64().unwrap();
    assert!((e0 - 1.5).abs() < 1e-6, "E_0 = {e0}");
    // the beta = 0 root of n = 2 must carry no frequency
    let entries = json["truncation_reference"]["entries"].as_array().unwrap();
    let zero_root = entries
        .iter()
        .find(|e| e["n"] == 2 && e["beta_root"] == 0.0)
        .unwrap();
    assert!(zero_root["omega"].is_null());
    assert!(!json["truncation_reference"]["caveat"]
        .as_str()
        .unwrap()
        .is_empty());
}

#[test]
fn energies_reduce_to_the_exact_oscillator_when_the_coupling_vanishes() {
    // g b B0 = 0 forces beta = 0 and no shift: E_j = W_j / 2 = 1, 3, 5, 7
    let dir = tempfile::tempdir().unwrap();
    let path = write_params_b0(dir.path(), 1.0, 0.0);
    let json = stdout_json(&run(&[
        "energies", "--params", path.to_str().unwrap(), "--states", "4",
    ]));
    assert_eq!(json["beta"].as_f64().unwrap(), 0.0);
    for (j, rec) in json["true_energies"].as_array().unwrap().iter().enumerate() {
        let want = 2.0 * j as f64 + 1.0;
        assert!((rec["energy"].as_f64().unwrap() - want).abs() < 1e-8);
    }
}

#[test]
fn malformed_parameter_files_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{"m":1.0,"g":1.0,"b":1.0,"B0":1.0,"k":0.0,"l":0,"s":1}"#,
    )
    .unwrap();
    let out = run(&["energies", "--params", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("omega"), "stderr: {stderr}");
}

#[test]
fn sweep_produces_monotone_rows() {
    let out = run(&[
        "sweep",
        "--gamma",
        "0",
        "--beta-min",
        "-1.5",
        "--beta-max",
        "1.5",
        "--steps",
        "7",
        "--states",
        "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "beta,state_index,W,inv_xi_expectation");
    let mut per_state: Vec<Vec<f64>> = vec![Vec::new(); 2];
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4);
        let state: usize = cols[1].parse().unwrap();
        per_state[state].push(cols[2].parse().unwrap());
        let inv: f64 = cols[3].parse().unwrap();
        assert!(inv > 0.0);
    }
    for series in &per_state {
        assert_eq!(series.len(), 7);
        for w in series.windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}

#[test]
fn usage_errors_exit_with_code_two() {
    // degenerate sweep range
    let out = run(&[
        "sweep", "--gamma", "0", "--beta-min", "0", "--beta-max", "0", "--steps", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // malformed flags
    let out = run(&["spectrum", "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["truncate", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // raw basis beyond its documented cap
    let out = run(&[
        "spectrum",
        "--gamma",
        "0",
        "--beta",
        "1",
        "--basis-kind",
        "raw",
        "--basis-size",
        "30",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("orthonormal-oscillator"), "stderr: {stderr}");
}

#[test]
fn validate_quick_passes_and_degraded_basis_fails() {
    let out = run(&["validate", "--quick"]);
    assert!(
        out.status.success(),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS  golden-spectra"));
    assert!(!text.contains("FAIL"));

    // an under-converged basis must fail the reference checks loudly
    let out = run(&["validate", "--quick", "--basis-size", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL  golden-spectra"), "stdout: {text}");
}

#[test]
fn output_flag_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("truncate.json");
    let out = run(&[
        "truncate",
        "--n",
        "1",
        "--gamma",
        "0",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["command"], "truncate");

    // csv format
    let csv_path = dir.path().join("truncate.csv");
    let out = run(&[
        "truncate",
        "--n",
        "2",
        "--gamma",
        "1",
        "--format",
        "csv",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("n,i,gamma,beta_root,W_exact,node_count"));
    assert_eq!(text.lines().count(), 4);
}
