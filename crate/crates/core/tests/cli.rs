use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudodice"))
        .args(args)
        .current_dir(cwd)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn digits_to_bits_to_census_and_normality() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&cli(&["gen-digits", "--constant", "pi", "--count", "20000", "--out", "pi.digits", "--verify"], d));
    ok(&cli(&["binarize", "--in", "pi.digits", "--threshold", "5", "--out", "pi.bits"], d));
    let bits = std::fs::read_to_string(d.join("pi.bits")).unwrap();
    // 1415926535 → 0001101101
    assert!(bits.lines().nth(1).unwrap().starts_with("0001101101"));

    ok(&cli(&["census", "--in", "pi.bits", "--n", "20000", "--length", "7", "--out", "census.csv"], d));
    let csv = std::fs::read_to_string(d.join("census.csv")).unwrap();
    assert_eq!(csv.lines().count(), 129);

    ok(&cli(
        &["normality", "--in", "pi.bits", "--n-grid", "10000,20000", "--k", "5", "--out", "normality.json"],
        d,
    ));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("normality.json")).unwrap()).unwrap();
    let reports = json["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["W"], 9994);
    assert_eq!(reports[0]["bound"].as_f64().unwrap(), 0.5 + 5.0 / (2.0 * 9994f64.sqrt()));
    assert_eq!(json["source"], "digits:pi:ge5");
}

#[test]
fn exclusive_threshold_flag() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&cli(&["gen-digits", "--constant", "e", "--count", "10", "--out", "e.digits"], d));
    ok(&cli(
        &["binarize", "--in", "e.digits", "--threshold", "5", "--digit-threshold-inclusive", "false", "--out", "e.bits"],
        d,
    ));
    let bits = std::fs::read_to_string(d.join("e.bits")).unwrap();
    // 7182818284 with digit > 5
    assert_eq!(bits.lines().nth(1).unwrap(), "1010101010");
    assert!(bits.starts_with("#pseudodice-bits source=digits:e:gt5"));
}

#[test]
fn mt_bits() {
    let dir = tempfile::tempdir().unwrap();
    ok(&cli(&["mt", "--seed", "5489", "--count", "5", "--out", "mt.bits"], dir.path()));
    let text = std::fs::read_to_string(dir.path().join("mt.bits")).unwrap();
    // first reals 0.8147…, 0.9058…, 0.1270…, 0.9134…, 0.6324…
    assert_eq!(text.lines().nth(1).unwrap(), "11011");
}

#[test]
fn experiment_b_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("b.cfg"), "trials = 2\nmt_seeds = 1,2\ntrain_range = 1:500\nmax_epochs = 5\n").unwrap();
    ok(&cli(&["experiment", "b", "--config", "b.cfg", "--out", "out"], d));
    for f in ["experiment_b.json", "experiment_b.metadata.json", "experiment_b_seeds.csv", "experiment_b_trials.csv"] {
        assert!(d.join("out").join(f).exists(), "{f}");
    }
    let report = pseudodice::harness::read_report(d.join("out/experiment_b.json")).unwrap();
    assert_eq!(report.config["trials"], "2");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.cfg"), "no_such_key = 1\n").unwrap();
    assert_eq!(cli(&["experiment", "b", "--config", "bad.cfg", "--out", "o"], d).status.code(), Some(2));

    std::fs::write(d.join("c.cfg"), format!("digit_cache_dir = {}\n", d.join("empty").display())).unwrap();
    assert_eq!(cli(&["experiment", "c", "--config", "c.cfg", "--out", "o"], d).status.code(), Some(3));

    ok(&cli(&["mt", "--seed", "1", "--count", "100", "--out", "short.bits"], d));
    assert_eq!(
        cli(&["census", "--in", "short.bits", "--n", "1000", "--out", "x.csv"], d).status.code(),
        Some(3)
    );
    assert_eq!(
        cli(&["gen-digits", "--constant", "pi", "--count", "30000000", "--out", "x"], d).status.code(),
        Some(3)
    );
    assert_eq!(cli(&["gen-digits", "--constant", "tau", "--count", "1", "--out", "x"], d).status.code(), Some(2));
    assert_eq!(cli(&["census", "--in", "missing.bits", "--n", "10", "--out", "x"], d).status.code(), Some(1));
}
