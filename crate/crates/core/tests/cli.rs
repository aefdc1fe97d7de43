mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::REFERENCE_CONFIG;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hsr-power"))
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn run_cli(config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg("run")
        .arg("--config")
        .arg(config)
        .arg("--out-dir")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn version_and_help() {
    let out = bin().arg("--version").output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("hsr-power"));
    assert_eq!(code(&bin().arg("--help").output().unwrap()), 0);
    assert_eq!(code(&bin().arg("bogus").output().unwrap()), 1);
}

#[test]
fn constant_scheme_with_three_samples() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{REFERENCE_CONFIG}\n[output]\nschemes = [\"constant\"]\nsamples = 3\n");
    let out = run_cli(&write_config(dir.path(), &text), dir.path(), &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("profiles.csv"));
    assert_eq!(
        header,
        [
            "tau_s",
            "power_w_constant",
            "rate_nats_per_s_constant",
            "service_nats_constant"
        ]
    );
    assert_eq!(rows.len(), 3);
    assert_eq!(column(&header, &rows, "tau_s"), [0.0, 15.0, 30.0]);
    let power = column(&header, &rows, "power_w_constant");
    assert!(power.iter().all(|&p| (p - 3.16227766017).abs() < 1e-10));
    assert!(!dir.path().join("solver_trace.csv").exists());
}

#[test]
fn all_schemes_reproduce_the_cutoff_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cli(&write_config(dir.path(), REFERENCE_CONFIG), dir.path(), &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let (header, rows) = read_csv(&dir.path().join("profiles.csv"));
    assert_eq!(header.len(), 1 + 3 * 5);
    assert_eq!(rows.len(), 301);
    let tau = column(&header, &rows, "tau_s");
    let rate = column(&header, &rows, "rate_nats_per_s_waterfilling");
    for (t, c) in tau.iter().zip(&rate) {
        if *t > 10.45 {
            assert_eq!(*c, 0.0, "rate at {t}");
        } else if *t < 10.35 {
            assert!(*c > 0.0, "rate at {t}");
        }
    }

    let (header, rows) = read_csv(&dir.path().join("solver_trace.csv"));
    assert_eq!(header, ["iteration", "lambda", "r_delta_p"]);
    let r = column(&header, &rows, "r_delta_p");
    assert!(r.last().unwrap().abs() <= 0.001);

    let (header, rows) = read_csv(&dir.path().join("metrics.csv"));
    assert_eq!(rows.len(), 5);
    assert_eq!(header[0], "scheme");
    let wf = rows.iter().find(|r| r[0] == "waterfilling").unwrap();
    assert_eq!(wf[2], "-inf");
    assert!(rows.iter().all(|r| r[7] == "true"));
}

#[test]
fn bits_rescale_rates_but_not_power() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{REFERENCE_CONFIG}\n[output]\nschemes = [\"inversion\"]\nsamples = 11\n");
    let config = write_config(dir.path(), &text);
    let nats = dir.path().join("nats");
    let bits = dir.path().join("bits");
    assert_eq!(code(&run_cli(&config, &nats, &[])), 0);
    assert_eq!(code(&run_cli(&config, &bits, &["--bits"])), 0);
    let (hn, rn) = read_csv(&nats.join("profiles.csv"));
    let (hb, rb) = read_csv(&bits.join("profiles.csv"));
    assert_eq!(
        column(&hn, &rn, "power_w_inversion"),
        column(&hb, &rb, "power_w_inversion")
    );
    let scale = std::f64::consts::LOG2_E;
    for (a, b) in [
        ("rate_nats_per_s_inversion", "rate_bits_per_s_inversion"),
        ("service_nats_inversion", "service_bits_inversion"),
    ] {
        for (x, y) in column(&hn, &rn, a).iter().zip(column(&hb, &rb, b)) {
            assert!(
                (x * scale - y).abs() <= 1e-9 * y.abs().max(1.0),
                "{a}: {x} vs {y}"
            );
        }
    }
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), REFERENCE_CONFIG);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&run_cli(&config, &a, &[])), 0);
    assert_eq!(code(&run_cli(&config, &b, &[])), 0);
    for file in [
        "profiles.csv",
        "metrics.csv",
        "solver_trace.csv",
        "calibration.txt",
    ] {
        assert_eq!(
            std::fs::read(a.join(file)).unwrap(),
            std::fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn calibrate_then_rerun_with_the_density() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), REFERENCE_CONFIG);
    let out = bin()
        .args(["calibrate", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("noise_psd_w_per_hz"));

    let psd = hsr_power::cli::read_calibration(&dir.path().join("calibration.txt")).unwrap();
    let text = REFERENCE_CONFIG.replace(
        "target_cutoff_s = 10.4",
        &format!("noise_psd_w_per_hz = {psd:e}"),
    );
    let text = format!("{text}\n[output]\nschemes = [\"waterfilling\"]\nsamples = 3001\n");
    let rerun = dir.path().join("rerun");
    let out = run_cli(&write_config(dir.path(), &text), &rerun, &[]);
    assert_eq!(code(&out), 0);
    assert!(!rerun.join("calibration.txt").exists());
    let (header, rows) = read_csv(&rerun.join("profiles.csv"));
    let tau = column(&header, &rows, "tau_s");
    let power = column(&header, &rows, "power_w_waterfilling");
    let last_on = tau
        .iter()
        .zip(&power)
        .filter(|(_, p)| **p > 0.0)
        .map(|(t, _)| *t)
        .fold(0.0, f64::max);
    assert!(
        (last_on - 10.4).abs() <= 0.05,
        "last transmitting sample at {last_on}"
    );
}

#[test]
fn calibrate_rejects_target_beyond_traversal() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), REFERENCE_CONFIG);
    let out = bin()
        .args(["calibrate", "--target-cutoff", "30", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn calibration_outside_the_search_bracket_is_numeric() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), REFERENCE_CONFIG);
    let out = bin()
        .args(["calibrate", "--target-cutoff", "1e-6", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_key_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = REFERENCE_CONFIG.replace("d0_m = 100.0\n", "");
    let out = run_cli(&write_config(dir.path(), &text), dir.path(), &[]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("d0_m"));
}

#[test]
fn non_convergence_exits_two_with_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let text = REFERENCE_CONFIG
        .replace("max_iterations = 10000", "max_iterations = 1")
        .replace("power_ratio_tol = 0.001", "power_ratio_tol = 1e-9");
    let out = run_cli(&write_config(dir.path(), &text), dir.path(), &[]);
    assert_eq!(code(&out), 2);
    let (_, rows) = read_csv(&dir.path().join("metrics.csv"));
    let eps = rows.iter().find(|r| r[0] == "pf_epsilon_optimal").unwrap();
    assert_eq!(eps[7], "false");
}

#[test]
fn unwritable_output_directory_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), REFERENCE_CONFIG);
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = run_cli(&config, &blocker.join("sub"), &[]);
    assert_eq!(code(&out), 1);
}
