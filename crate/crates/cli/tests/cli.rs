use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_scourbench"));
    c.env_remove("SCOURBENCH_DATA_DIR");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ingest(dir: &Path, source: &str) -> PathBuf {
    let input = fixture(&format!("{source}_export.csv"));
    let o = run(&[
        "ingest",
        "--source",
        source,
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir.join(format!("{source}.csv"))
}

#[test]
fn predict_examples() {
    let o = run(&["predict", "--equation", "chitale", "--y1", "1", "--V1", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("0.490"));

    let o = run(&[
        "predict", "--equation", "laursen", "--B", "2", "--L", "2", "--y1", "1", "--theta", "0", "--shape", "1",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("2.437"));

    let tables = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/factors");
    for e in fs::read_dir(&src).unwrap() {
        let p = e.unwrap().path();
        fs::copy(&p, tables.path().join(p.file_name().unwrap())).unwrap();
    }
    let hec = tables.path().join("hec18.factors");
    let text = fs::read_to_string(&hec).unwrap().replace("bed = 1.1", "bed = 1.0");
    fs::write(&hec, text).unwrap();
    let v = (9.81f64).sqrt().to_string();
    let o = run(&[
        "predict", "--equation", "hec18", "--B", "1", "--L", "1", "--y1", "1", "--V1", &v, "--theta", "0", "--shape", "1",
        "--factors", tables.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().next(), Some("2.000"));
}

#[test]
fn predict_usage_errors() {
    let o = run(&["predict", "--equation", "hec18", "--B", "1", "--y1", "1", "--V1", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires L"), "{}", stderr(&o));
    let o = run(&["predict", "--equation", "nosuch", "--y1", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["predict", "--equation", "tamu", "--B", "1", "--y1", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--V1"));
}

#[test]
fn ingest_writes_canonical_data_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let canonical = ingest(dir.path(), "field");
    let text = fs::read_to_string(&canonical).unwrap();
    assert!(text.starts_with("# scourbench-schema v1"));
    // schema line, header, 40 records
    assert_eq!(text.lines().count(), 42);
    assert_eq!(text.matches("excluded_zero_y1").count(), 2);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ingest-field.json")).unwrap()).unwrap();
    assert_eq!(report["excluded_zero_y1"], 2);
    assert_eq!(report["excluded_zero_V1"], 1);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ingest-manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn ingest_missing_column_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("lab_export.csv")).unwrap();
    let broken: String = text
        .lines()
        .map(|l| l.splitn(4, ',').enumerate().filter(|(i, _)| *i != 2).map(|(_, s)| s).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n");
    let input = dir.path().join("broken.csv");
    fs::write(&input, broken).unwrap();
    let o = run(&["ingest", "--source", "lab", "--input", input.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("ys_measured_m"), "{}", stderr(&o));
}

#[test]
fn accuracy_writes_one_row_per_equation() {
    let dir = tempfile::tempdir().unwrap();
    let data = ingest(dir.path(), "field");
    let o = run(&[
        "accuracy", "--source", "field", "--data", data.to_str().unwrap(), "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("accuracy-field-all.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(dir.path().join("scatter-hec18-field-all.csv").exists());

    let o = run(&[
        "accuracy", "--source", "field", "--equation", "hec18", "--format", "svg", "--data",
        data.to_str().unwrap(), "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(fs::read_to_string(dir.path().join("scatter-hec18-field-all.svg")).unwrap().starts_with("<svg"));

    let o = run(&["accuracy", "--source", "field", "--data", data.to_str().unwrap(), "--length-ratio", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn data_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    ingest(dir.path(), "lab");
    let out = dir.path().join("out");
    let o = bin()
        .args(["fit", "--source", "lab", "--format", "json", "--out", out.to_str().unwrap()])
        .env("SCOURBENCH_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("fit-lab.json")).unwrap()).unwrap();
    let selected = rows.as_array().unwrap().iter().filter(|r| r["selected"] == true).count();
    assert_eq!(selected, 5);

    let o = run(&["fit", "--source", "lab"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SCOURBENCH_DATA_DIR"));
}

#[test]
fn oat_needs_no_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["oat", "--source", "lab", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("oat-lab.csv")).unwrap();
    // 8 equations x 5 lab parameters
    assert_eq!(csv.lines().count(), 41);
}

fn gsa_report(dir: &Path, extra: &[&str]) -> Vec<u8> {
    let mut args = vec![
        "gsa", "--equation", "hec18", "--source", "field", "--seed", "42", "--N", "1000", "--resamples", "100",
        "--out",
    ];
    args.push(dir.to_str().unwrap());
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    fs::read(dir.join("gsa-hec18-field.json")).unwrap()
}

#[test]
fn gsa_is_byte_identical_across_runs_and_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let ra = gsa_report(a.path(), &["--threads", "1"]);
    let rb = gsa_report(b.path(), &["--threads", "1"]);
    let rc = gsa_report(c.path(), &["--threads", "4"]);
    assert_eq!(ra, rb);
    assert_eq!(ra, rc);
    assert_eq!(
        fs::read(a.path().join("gsa-hec18-field-cdf.csv")).unwrap(),
        fs::read(c.path().join("gsa-hec18-field-cdf.csv")).unwrap()
    );
    let report: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["seed"], 42);
    assert_eq!(report["N"], 1000);
    assert!(report["dummy"]["q95"].as_f64().unwrap() > 0.0);
    for idx in report["indices"].as_array().unwrap() {
        assert!(idx["significant"].is_boolean());
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.path().join("gsa-manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 42);
    assert_eq!(manifest["config"]["gsa"]["bootstrap_resamples"], 100);
}

#[test]
fn gsa_requires_a_seed() {
    let o = run(&["gsa", "--equation", "hec18", "--source", "field"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed"));
    let o = run(&["gsa", "--equation", "hec18", "--source", "field", "--seed", "1", "--N", "50"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        format!(
            "equation = \"chitale\"\nsource = \"lab\"\nseed = 5\nN = 500\nresamples = 20\nout = \"{}\"\n",
            dir.path().join("from-file").display()
        ),
    )
    .unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "gsa"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("from-file/gsa-chitale-lab.json")).unwrap()).unwrap();
    assert_eq!(report["N"], 500);

    let o = run(&["--config", cfg.to_str().unwrap(), "gsa", "--seed", "9", "--out", dir.path().join("flag").to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("flag/gsa-chitale-lab.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 9);

    fs::write(&cfg, "sed = 1\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "oat", "--source", "lab"]);
    assert_eq!(o.status.code(), Some(2));
}
