use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/demo")
}

fn modindex(args: &[&str]) -> Output {
    modindex_with_threads(args, "")
}

fn modindex_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modindex"))
        .args(args)
        .env("MODINDEX_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn analyze_json_reports_system_metrics() {
    let root = fixture();
    let out = modindex(&["analyze", path_str(&root)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], "1.0");
    assert_eq!(doc["project"], "demo");
    let m_i = doc["system"]["m_i"].as_f64().unwrap();
    assert!((m_i - 0.41537676132245477).abs() < 1e-12);
    assert_eq!(doc["system"]["totals"]["classes"], 8);
    assert_eq!(doc["packages"].as_array().unwrap().len(), 3);
    assert!(doc.get("worst_offenders").is_none());
}

#[test]
fn analyze_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let root = fixture();
    let out = modindex(&["analyze", path_str(&root), "--out", path_str(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["project"], "demo");
}

#[test]
fn analyze_csv_with_matrix_and_worst() {
    let root = fixture();
    let out = modindex(&["analyze", path_str(&root), "--format", "csv", "--matrix", "--worst", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let sections: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(sections.len(), 3, "{text}");
    assert!(sections[0].starts_with("package,class,ncloc,f,lcom4,loc_q,f_q,h_q,c_q,p_q\n"));
    assert_eq!(sections[0].lines().count(), 9);
    assert!(sections[1].starts_with("package,org.demo.model,org.demo.service,org.demo.util\n"));
    assert!(sections[2].starts_with("rank,class,package,ncloc,f,lcom4,c_q,lever\n"));
    assert_eq!(sections[2].trim_end().lines().count(), 3);
}

#[test]
fn worst_offenders_in_json() {
    let root = fixture();
    let out = modindex(&["analyze", path_str(&root), "--worst", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let worst = doc["worst_offenders"].as_array().unwrap();
    assert_eq!(worst.len(), 3);
    let c_q: Vec<f64> = worst.iter().map(|o| o["c_q"].as_f64().unwrap()).collect();
    assert!(c_q.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn usage_errors_exit_one() {
    let missing = modindex(&["analyze", "/nonexistent/tree"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("/nonexistent/tree"));

    assert_eq!(modindex(&["analyze", "--bogus", "x"]).status.code(), Some(1));
    assert_eq!(modindex(&[]).status.code(), Some(1));

    let root = fixture();
    for n in ["0", "-2"] {
        let out = modindex(&["analyze", path_str(&root), "--worst", n]);
        assert_eq!(out.status.code(), Some(1), "--worst {n}");
    }

    let bad_threads = modindex_with_threads(&["analyze", path_str(&root)], "many");
    assert_eq!(bad_threads.status.code(), Some(1));
    assert!(stderr(&bad_threads).contains("MODINDEX_THREADS"));
}

#[test]
fn help_and_version_exit_zero() {
    let help = modindex(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("analyze"));
    assert_eq!(modindex(&["--version"]).status.code(), Some(0));
}

#[test]
fn empty_tree_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = modindex(&["analyze", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unbalanced_file_exits_two_but_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir_all(dir.path().join("p")).unwrap();
    fs::write(dir.path().join("p/Good.java"), "package p;\nclass Good {\n  void run() {}\n}\n").unwrap();
    fs::write(dir.path().join("p/Bad.java"), "package p;\nclass Bad {\n  void run() {\n}\n").unwrap();
    let out = modindex(&["analyze", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Bad.java"));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["system"]["totals"]["classes"], 1);
}

#[test]
fn config_file_changes_extraction() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("modindex.conf");
    fs::write(
        &config,
        "# drop the utilities\nexclude_globs = org/demo/util/**\ncount_constructors_as_functions = false\n",
    )
    .unwrap();
    let root = fixture();
    let out = modindex(&["--config", path_str(&config), "analyze", path_str(&root)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["packages"].as_array().unwrap().len(), 2);

    fs::write(&config, "colour = blue\n").unwrap();
    let out = modindex(&["--config", path_str(&config), "analyze", path_str(&root)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("colour"));
}

#[test]
fn output_is_identical_across_worker_counts() {
    let root = fixture();
    for format in ["json", "csv"] {
        let args = ["analyze", path_str(&root), "--format", format, "--matrix", "--worst", "4"];
        let one = modindex_with_threads(&args, "1");
        let eight = modindex_with_threads(&args, "8");
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, eight.stdout, "{format}");
    }
}

#[test]
fn explain_prints_derivation() {
    let root = fixture();
    let out = modindex(&["explain", path_str(&root), "--class", "org.demo.service.GraphService"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("class org.demo.service.GraphService"));
    assert!(text.contains("lcom4"));

    let unknown = modindex(&["explain", path_str(&root), "--class", "org.demo.Nope"]);
    assert_eq!(unknown.status.code(), Some(1));
}

fn write_manifest(dir: &Path) -> PathBuf {
    let small = dir.join("small");
    fs::create_dir_all(small.join("a")).unwrap();
    fs::write(small.join("a/One.java"), "package a;\nclass One {\n  int x;\n  int get() { return x; }\n}\n").unwrap();
    let manifest = dir.join("series.tsv");
    fs::write(
        &manifest,
        format!(
            "# project: demo-series\n0.1\t2001-02-03\tsmall\n0.2\t2002-03-04\t{}\n",
            path_str(&fixture())
        ),
    )
    .unwrap();
    manifest
}

#[test]
fn evolve_json_and_charts() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_manifest(dir.path());
    let charts = dir.path().join("charts");
    let out = modindex(&["evolve", path_str(&manifest), "--charts", path_str(&charts)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["project"], "demo-series");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["label"], "0.1");
    assert!(doc["growth"].is_array());

    let mut svgs: Vec<String> = fs::read_dir(&charts)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    svgs.sort();
    assert_eq!(svgs.len(), 9);
    for name in &svgs {
        assert!(name.ends_with(".svg"));
        let svg = fs::read_to_string(charts.join(name)).unwrap();
        roxmltree::Document::parse(&svg).expect("well-formed SVG");
    }
}

#[test]
fn evolve_csv_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_manifest(dir.path());
    let out = modindex(&["evolve", path_str(&manifest), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 3);

    fs::create_dir_all(dir.path().join("empty")).unwrap();
    let broken = dir.path().join("broken.tsv");
    fs::write(&broken, "0.1\t2001-02-03\tsmall\n0.2\t2002-03-04\tempty\n").unwrap();
    let out = modindex(&["evolve", path_str(&broken), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`0.2`"));
    assert_eq!(stdout(&out).lines().count(), 2);

    let missing = dir.path().join("missing.tsv");
    fs::write(&missing, "0.1\t2001-02-03\tnowhere\n").unwrap();
    let out = modindex(&["evolve", path_str(&missing)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nowhere"));

    let bad_date = dir.path().join("bad.tsv");
    fs::write(&bad_date, "0.1\t03/02/2001\tsmall\n").unwrap();
    let out = modindex(&["evolve", path_str(&bad_date)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad.tsv:1"));
}
