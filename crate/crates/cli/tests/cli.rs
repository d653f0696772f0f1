use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn wavecert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavecert")).args(args).env_remove("WAVECERT_OUT").output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wavecert-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exponents_prints_critical_power() {
    let out = wavecert(&["exponents", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let p_c = r["result"]["p_c"].as_f64().unwrap();
    assert!((p_c - 2.4142136).abs() < 1e-7);
    assert_eq!(r["config"]["subcommand"], "exponents");
    assert!(r["version"].is_string() && r["seed"].is_u64());
}

#[test]
fn taylor_sweep_passes() {
    let out = wavecert(&["verify-taylor", "--samples", "1000000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["result"]["min_gap"].as_f64().unwrap() >= -1e-12);
    assert_eq!(r["seed"], 7);
}

#[test]
fn estimate_report_has_finite_ratio() {
    let out = wavecert(&["verify-estimate", "--source", "bump", "--s", "1.6", "--delta", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let ratio = r["result"]["ratio"].as_f64().unwrap();
    assert!(ratio.is_finite() && ratio > 0.0);
    assert!(r["grid"]["dr"].as_f64().is_some());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wavecert(&["verify-taylor", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(wavecert(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(wavecert(&["solve-linear", "--source", "nonesuch"]).status.code(), Some(2));
    assert_eq!(wavecert(&["verify-estimate", "--s", "2.5"]).status.code(), Some(2));
    let dir = scratch("bad-config");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "[grid]\ndr = quick\n").unwrap();
    let out = wavecert(&["--config", cfg.to_str().unwrap(), "solve-linear"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dr"));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn failed_invariant_exits_one_and_names_check() {
    let out = wavecert(&["oracle-compare", "--dr", "0.5", "--t-max", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle-agreement"));
    assert_eq!(report(&out)["pass"], false);
}

#[test]
fn config_file_and_env_output_dir() {
    let dir = scratch("env");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# coarse run\n[grid]\ndr = 0.0625\nt_max = 2\nl_max = 2\n[run]\nsource = shell\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wavecert"))
        .args(["--config", cfg.to_str().unwrap(), "solve-linear"])
        .env("WAVECERT_OUT", dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["source"], "shell");
    assert_eq!(r["grid"]["dr"], 0.0625);
    let csv = std::fs::read_to_string(dir.join("out/field.csv")).unwrap();
    assert!(csv.starts_with("l,m,t,r,value\n"));
    let persisted = std::fs::read_to_string(dir.join("out/solve-linear.json")).unwrap();
    assert_eq!(persisted.as_bytes(), &out.stdout[..]);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn persisted_config_reproduces_report() {
    let dir = scratch("replay");
    let first = wavecert(&["verify-hardy", "--profiles", "8", "--seed", "21"]);
    assert_eq!(first.status.code(), Some(0));
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, report(&first)["config"].to_string()).unwrap();
    let again = wavecert(&["--config", cfg.to_str().unwrap(), "verify-hardy"]);
    assert_eq!(first.stdout, again.stdout);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn sweep_writes_csv() {
    let dir = scratch("sweep");
    let out = wavecert(&["--out", dir.to_str().unwrap(), "sweep", "--ps", "2,2.5", "--epss", "0.001,40", "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,eps,damped,outcome,T_star,Q_max");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].contains("blowup"));
    let _ = std::fs::remove_dir_all(dir);
}
