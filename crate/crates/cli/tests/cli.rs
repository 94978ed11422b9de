//! End-to-end runs of the `wavetm` binary against the shipped fixtures.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavetm"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Real part of the CSV row whose x is closest to the target.
fn value_near(csv: &str, x0: f64) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for line in csv.lines().skip(1) {
        let mut fields = line.split(',');
        let x: f64 = fields.next().unwrap().parse().unwrap();
        let re: f64 = fields.next().unwrap().parse().unwrap();
        if (x - x0).abs() < best.0 {
            best = ((x - x0).abs(), re);
        }
    }
    best.1
}

#[test]
fn shipped_fixtures_match_the_library_constructors() {
    for (name, spec) in wavetm_core::fixtures::all_named() {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let parsed =
            wavetm_core::PotentialSpec::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parsed, spec, "fixture file {name}.json drifted");
    }
}

#[test]
fn scatter_on_zero_potential_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("zero.json");
    std::fs::write(
        &spec_path,
        r#"{"family":"rectangular_barrier","params":{"z":[0.0,0.0]},"support":[0.0,1.0],"coupling":"constant"}"#,
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let status = bin()
        .args(["scatter", "--spec"])
        .arg(&spec_path)
        .args(["--k", "1.0", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let record = read_json(&out);
    let m = record["M"].as_array().unwrap();
    assert!((m[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(m[1][0].as_f64().unwrap().abs() < 1e-12);
    assert!((record["T"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(record["det_residual"].as_f64().unwrap() < 1e-12);
    // sidecar carries the config echo
    let meta = read_json(&dir.path().join("out.json.meta.json"));
    assert_eq!(meta["subcommand"], "scatter");
    assert_eq!(meta["params"]["k"], 1.0);
}

#[test]
fn scan_is_deterministic_and_plot_ready() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = bin()
            .args(["scan", "--spec"])
            .arg(fixture("multimode"))
            .args([
                "--k-min",
                "0.5",
                "--k-max",
                "1.5",
                "--k-steps",
                "16",
                "--method",
                "born2",
                "--gnuplot-script",
                "--out",
            ])
            .arg(&out)
            .env("WAVETM_THREADS", "2")
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(&out).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b, "identical runs must be byte-identical");

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,abs_Rl,abs_Rr,abs_Tm1,method,flags"
    );
    assert_eq!(lines.count(), 16);
    assert!(dir.path().join("a.csv.gp").exists());
}

#[test]
fn scan_diagnostics_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("diag.csv");
    let status = bin()
        .args(["scan", "--spec"])
        .arg(fixture("barrier"))
        .args([
            "--k-min",
            "0.5",
            "--k-max",
            "1.5",
            "--k-steps",
            "4",
            "--diagnostics",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text
        .lines()
        .next()
        .unwrap()
        .ends_with("n_dev_max,exceptional,ph_residual_max"));
    // the unit barrier has a turning point at k = 1
    let row_at_k1 = text.lines().find(|l| l.starts_with("1,")).unwrap();
    assert!(row_at_k1.contains(",true,"));
}

#[test]
fn born_report_on_delta_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("born.json");
    let status = bin()
        .args(["born", "--spec"])
        .arg(fixture("delta_pair"))
        .args(["--k", "1.0", "--order", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let record = read_json(&out);
    assert_eq!(record["order"], 2);
    assert_eq!(record["terms"].as_array().unwrap().len(), 2);
    assert!(record["amplitudes"]["T"].is_array());
}

#[test]
fn invisibility_report_lists_the_multimode_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inv.json");
    let status = bin()
        .args(["invisibility", "--spec"])
        .arg(fixture("multimode"))
        .args(["--jmax", "8", "--method", "born2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let record = read_json(&out);
    let predictions = record["predictions"].as_array().unwrap();
    assert_eq!(predictions.len(), 3);
    let verifications = record["verifications"].as_array().unwrap();
    assert_eq!(verifications.len(), 3);
    assert!(verifications.iter().all(|v| v["pass"].as_bool().unwrap()));
}

#[test]
fn invert_analytic_barrier_writes_profile_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let status = bin()
        .args([
            "invert",
            "--route",
            "m12",
            "--analytic",
            r#"{"name":"barrier_offdiag","z":[1.0,0.0],"L":1.0}"#,
            "--x-min",
            "-0.5",
            "--x-max",
            "1.5",
            "--x-steps",
            "81",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,re_v,im_v");
    // pick the row nearest x = 0.5: the reconstruction is z there
    let re = value_near(&text, 0.5);
    assert!((re - 1.0).abs() < 1e-3, "v(0.5) = {re}");
    let meta = read_json(&dir.path().join("v.csv.meta.json"));
    assert_eq!(meta["route"], "m12");
    assert!(meta["alpha"].is_null());
    assert!(meta["kmax"].as_f64().unwrap() > 0.0);
}

#[test]
fn invert_reads_tabulated_csv() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let mut text = String::from("k,re,im\n");
    let n = 256;
    let dk = 9.0 / n as f64 * 2.0;
    for i in 0..n {
        let k: f64 = -9.0 + dk * (i as f64 + 0.5);
        let v = (-(k * k)).exp(); // gaussian bump, z = 1, L = 1
        text.push_str(&format!("{k},{v},0\n"));
    }
    std::fs::write(&data, text).unwrap();
    let out = dir.path().join("v.csv");
    let status = bin()
        .args(["invert", "--route", "m12", "--data"])
        .arg(&data)
        .args(["--x-min", "-3", "--x-max", "3", "--x-steps", "61", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    // odd Gaussian-derivative potential: v(0.5) = -2*0.5*e^{-0.25}/sqrt(pi)
    let text = std::fs::read_to_string(&out).unwrap();
    let re = value_near(&text, 0.5);
    let expect = -2.0 * 0.5 * (-0.25f64).exp() / std::f64::consts::PI.sqrt();
    assert!((re - expect).abs() < 1e-4, "v(0.5) = {re}, expect {expect}");
}

#[test]
fn broken_inputs_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("broken.json");
    std::fs::write(&spec_path, r#"{"family":"no_such_family","params":{}}"#).unwrap();
    let out = dir.path().join("out.json");
    let status = bin()
        .args(["scatter", "--spec"])
        .arg(&spec_path)
        .args(["--k", "1.0", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // clap usage errors are exit code 2 as well
    let status = bin().args(["scan", "--nonsense"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn validate_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = bin()
        .args(["validate", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.matches("[PASS]").count(), 11, "{stdout}");
    let report = read_json(&out);
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 11);
}

#[test]
fn spectral_singularity_rows_are_flagged_not_fatal() {
    // a scan across a flagged row still succeeds; flags column carries it
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let status = bin()
        .args(["scan", "--spec"])
        .arg(fixture("barrier_complex"))
        .args([
            "--k-min",
            "0.2",
            "--k-max",
            "2.0",
            "--k-steps",
            "10",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
}
