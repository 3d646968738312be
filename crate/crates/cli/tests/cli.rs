use std::path::Path;
use std::process::{Command, Output};

use fluxsim_cli::table::{sha256_hex, Manifest};
use fluxsim_cli::{run, Mode, Preset, SweepSpec, Table};
use fluxsim_core::CircuitConfig;

fn fluxsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluxsim")).args(args).output().unwrap()
}

fn write_config(dir: &Path, json: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn preset_sweep_to_stdout() {
    let o = fluxsim(&["spectrum1d", "--preset", "fig4"]);
    assert_eq!(o.status.code(), Some(0));
    let t = Table::from_csv(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 81);
    assert_eq!(t.metadata["mode"], "spectrum1d");
    assert!(t.texts("status").unwrap().iter().all(|s| s == "ok"));
}

#[test]
fn output_file_and_manifest_digest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig7a.csv");
    let o = fluxsim(&["current", "--preset", "fig7a", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&out).unwrap();
    let m: Manifest =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.files["fig7a.csv"].sha256, sha256_hex(&bytes));
    assert_eq!(m.files["fig7a.csv"].bytes, bytes.len() as u64);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let a = fluxsim(&["spectrum1d", "--preset", "fig5", "--threads", "1"]);
    let b = fluxsim(&["spectrum1d", "--preset", "fig5", "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn emit_parse_emit_round_trip() {
    let o = fluxsim(&["beta", "--preset", "fig6"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(Table::from_csv(&text).unwrap().to_csv().unwrap(), text);
}

#[test]
fn json_output_marks_failures_null() {
    let o = fluxsim(&["beta", "--preset", "fig6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    // β = 10: the WKB ground level sits above the barrier.
    assert!(rows[0][3].is_null());
    assert!(rows[0][2].is_f64());
    assert_eq!(rows.len(), 91);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(fluxsim(&["spectrum1d"]).status.code(), Some(1));
    assert_eq!(fluxsim(&["no-such-mode", "--preset", "fig4"]).status.code(), Some(1));
    let cfg = write_config(dir.path(), r#"{"ejf_ghz": 2.0, "typo_key": 1}"#);
    assert_eq!(fluxsim(&["spectrum1d", "--config", &cfg]).status.code(), Some(1));
    let cfg = write_config(dir.path(), r#"{"ejf_ghz": -2.0, "ec_ghz": 0.5, "el_ghz": 0.15}"#);
    assert_eq!(fluxsim(&["spectrum1d", "--config", &cfg]).status.code(), Some(1));
    assert_eq!(fluxsim(&["spectrum1d", "--config", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn all_rows_failing_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"grid1d_min": 0.0, "grid1d_max": 1.0, "grid1d_n": 101, "sweep_steps": 3}"#);
    let o = fluxsim(&["spectrum1d", "--preset", "fig4", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let t = Table::from_csv(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert!(t.texts("status").unwrap().iter().all(|s| s == "grid-too-narrow"));
    assert!(t.numbers("e0").unwrap().iter().all(|x| x.is_nan()));
}

#[test]
fn config_file_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"ejf_ghz": 15.0, "sweep_steps": 5}"#);
    let o = fluxsim(&["spectrum1d", "--preset", "fig4", "--config", &cfg, "--levels", "2"]);
    let t = Table::from_csv(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 5);
    assert_eq!(t.columns, ["phi_delta", "e0", "e1", "gap01", "status"]);
    let file = CircuitConfig { ejf_ghz: Some(15.0), sweep_steps: Some(5), ..Default::default() };
    let lib =
        run(&SweepSpec { levels: 2, ..SweepSpec::new(Mode::Spectrum1d, Some(Preset::Fig4), Some(file)).unwrap() })
            .unwrap();
    assert_eq!(t.numbers("gap01"), lib.table.numbers("gap01"));
    assert_eq!(t.metadata["config"], lib.table.metadata["config"]);
}

#[test]
fn beats_start_localized() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"ejf_ghz": 2.0, "ec_ghz": 0.5, "el_ghz": 0.15, "phi1": 0.0, "phi2": 1.0}"#);
    let o = fluxsim(&["beats", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let t = Table::from_csv(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let pl = t.numbers("p_left").unwrap();
    let pr = t.numbers("p_right").unwrap();
    assert_eq!(pl[0], 1.0);
    // At degeneracy the fluxon fully tunnels within half a period 1/2Δ ≈ 3.4 ns.
    assert!(pr.iter().cloned().fold(0.0, f64::max) > 0.999);
    for (a, b) in pl.iter().zip(&pr) {
        assert!((a + b - 1.0).abs() < 1e-12);
    }
}

#[test]
fn protocol_with_given_shifts_is_exact_and_seeded() {
    let run = |seed: &str| {
        fluxsim(&["protocol", "--preset", "fig8", "--jz-mhz", "7.3", "6.1", "--noise", "0.05", "--seed", seed]).stdout
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
    let o = fluxsim(&["protocol", "--preset", "fig8", "--jz-mhz", "7.3", "6.1"]);
    let t = Table::from_csv(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(t.numbers("accuracy").unwrap(), vec![1.0; 3]);
    assert_eq!(t.texts("truth").unwrap(), ["L", "C", "R"]);
}
