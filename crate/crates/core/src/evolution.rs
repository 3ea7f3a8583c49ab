//! Runs the analysis over an ordered series of project versions.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{analyze_system, SystemAnalysis};
use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};
use crate::frontend::{extract_project, ExtractionConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionEntry {
    pub label: String,
    pub release_date: NaiveDate,
    pub source_root: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionSeries {
    pub project_name: String,
    pub entries: Vec<VersionEntry>,
}

/// Reads a manifest with one `label<TAB>date<TAB>path` line per version.
///
/// Blank lines and `#` comments are skipped; a `# project: name` comment
/// names the series (the manifest's file stem otherwise). Relative paths
/// are resolved against the manifest's directory. Dates are `YYYY-MM-DD`.
pub fn load_manifest(path: &Path) -> Result<VersionSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Manifest {
        path: path.to_path_buf(),
        line: 0,
        message: format!("cannot read manifest: {e}"),
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut project_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut entries: Vec<VersionEntry> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let fail = |message: String| Error::Manifest {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            if let Some(name) = comment.trim().strip_prefix("project:") {
                project_name = name.trim().to_string();
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [label, date, root] = fields[..] else {
            return Err(fail(format!(
                "expected `label<TAB>date<TAB>path`, found {} field(s)",
                fields.len()
            )));
        };
        if label.is_empty() {
            return Err(fail("empty version label".into()));
        }
        if entries.iter().any(|e| e.label == label) {
            return Err(fail(format!("duplicate version label `{label}`")));
        }
        let release_date = NaiveDate::parse_from_str(date, "%Y-%m-%d")
            .map_err(|e| fail(format!("version `{label}`: bad date `{date}`: {e}")))?;
        let source_root = base.join(root);
        if !source_root.exists() {
            return Err(fail(format!(
                "version `{label}`: source root `{}` does not exist",
                source_root.display()
            )));
        }
        entries.push(VersionEntry {
            label: label.to_string(),
            release_date,
            source_root,
        });
    }
    Ok(VersionSeries {
        project_name,
        entries,
    })
}

/// One version's headline numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionRow {
    pub label: String,
    pub date: NaiveDate,
    pub ncloc: u64,
    pub packages: usize,
    pub classes: usize,
    pub functions: u64,
    pub classes_per_package: f64,
    pub functions_per_class: f64,
    pub ncloc_per_class: f64,
    pub avg_p_q: f64,
    pub s_a: f64,
    pub m_i: f64,
}

impl EvolutionRow {
    pub fn from_analysis(label: &str, date: NaiveDate, analysis: &SystemAnalysis) -> Self {
        let s = &analysis.system;
        Self {
            label: label.to_string(),
            date,
            ncloc: s.totals.ncloc,
            packages: s.totals.packages,
            classes: s.totals.classes,
            functions: s.totals.functions,
            classes_per_package: s.averages.classes_per_package,
            functions_per_class: s.averages.functions_per_class,
            ncloc_per_class: s.averages.ncloc_per_class,
            avg_p_q: s.avg_p_q,
            s_a: s.s_a,
            m_i: s.m_i,
        }
    }

    /// Numeric columns in table order.
    pub fn values(&self) -> [(&'static str, f64); 10] {
        [
            ("ncloc", self.ncloc as f64),
            ("packages", self.packages as f64),
            ("classes", self.classes as f64),
            ("functions", self.functions as f64),
            ("classes_per_package", self.classes_per_package),
            ("functions_per_class", self.functions_per_class),
            ("ncloc_per_class", self.ncloc_per_class),
            ("avg_p_q", self.avg_p_q),
            ("s_a", self.s_a),
            ("m_i", self.m_i),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionFailure {
    pub label: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionTable {
    pub project_name: String,
    pub rows: Vec<EvolutionRow>,
    pub failures: Vec<VersionFailure>,
    /// Diagnostics of the successful versions, prefixed with their label.
    pub diagnostics: Vec<Diagnostic>,
}

impl EvolutionTable {
    pub fn has_errors(&self) -> bool {
        !self.failures.is_empty() || crate::diagnostic::has_errors(&self.diagnostics)
    }
}

pub fn analyze_version(entry: &VersionEntry, config: &ExtractionConfig) -> Result<SystemAnalysis> {
    let mut project = extract_project(&entry.source_root, config)?;
    project.version_label = entry.label.clone();
    analyze_system(&project, config)
}

/// Analyzes every version; versions that fail are recorded and skipped.
pub fn analyze_series(series: &VersionSeries, config: &ExtractionConfig) -> Result<EvolutionTable> {
    let outcomes: Vec<Result<SystemAnalysis>> = series
        .entries
        .par_iter()
        .map(|entry| analyze_version(entry, config))
        .collect();

    let mut table = EvolutionTable {
        project_name: series.project_name.clone(),
        rows: Vec::new(),
        failures: Vec::new(),
        diagnostics: Vec::new(),
    };
    for (entry, outcome) in series.entries.iter().zip(outcomes) {
        match outcome {
            Ok(analysis) => {
                table.rows.push(EvolutionRow::from_analysis(
                    &entry.label,
                    entry.release_date,
                    &analysis,
                ));
                table.diagnostics.extend(analysis.diagnostics.into_iter().map(|mut d| {
                    d.message = format!("[{}] {}", entry.label, d.message);
                    d
                }));
            }
            Err(e) => table.failures.push(VersionFailure {
                label: entry.label.clone(),
                message: e.to_string(),
            }),
        }
    }
    if table.rows.is_empty() && !series.entries.is_empty() {
        return Err(Error::AllVersionsFailed(series.entries.len()));
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub metric: String,
    pub first: f64,
    pub last: f64,
    /// `last / first`; absent when `first` is zero.
    pub ratio: Option<f64>,
}

/// First value, last value and growth ratio of every numeric column.
pub fn growth_summary(rows: &[EvolutionRow]) -> Result<Vec<Growth>> {
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return Err(Error::TooFewRows);
    };
    if rows.len() < 2 {
        return Err(Error::TooFewRows);
    }
    Ok(first
        .values()
        .iter()
        .zip(last.values())
        .map(|(&(metric, a), (_, b))| Growth {
            metric: metric.to_string(),
            first: a,
            last: b,
            ratio: (a != 0.0).then(|| b / a),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn demo_root() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/demo")
    }

    fn row(label: &str, ncloc: u64, packages: usize, classes: usize) -> EvolutionRow {
        EvolutionRow {
            label: label.into(),
            date: NaiveDate::from_ymd_opt(2001, 7, 7).unwrap(),
            ncloc,
            packages,
            classes,
            functions: 0,
            classes_per_package: classes as f64 / packages as f64,
            functions_per_class: 0.0,
            ncloc_per_class: ncloc as f64 / classes as f64,
            avg_p_q: 0.4,
            s_a: 0.7,
            m_i: 0.28,
        }
    }

    fn write_manifest(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("series.tsv");
        fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn manifest_keeps_file_order() {
        let dir = tempfile::tempdir().unwrap();
        for v in ["a", "b", "c"] {
            fs::create_dir(dir.path().join(v)).unwrap();
        }
        let m = write_manifest(
            dir.path(),
            "# project: demo\n\nv2\t2002-01-01\tb\nv1\t2001-01-01\ta\n# note\nv3\t2003-01-01\tc\n",
        );
        let s = load_manifest(&m).unwrap();
        assert_eq!(s.project_name, "demo");
        let labels: Vec<_> = s.entries.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["v2", "v1", "v3"]);
        assert_eq!(s.entries[0].source_root, dir.path().join("b"));
    }

    #[test]
    fn manifest_errors_name_the_entry() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("a")).unwrap();
        let missing = write_manifest(dir.path(), "v1\t2001-01-01\ta\nv2\t2002-01-01\tnope\n");
        let err = load_manifest(&missing).unwrap_err().to_string();
        assert!(err.contains("v2") && err.contains("nope") && err.contains(":2:"), "{err}");

        let dup = write_manifest(dir.path(), "v1\t2001-01-01\ta\nv1\t2002-01-01\ta\n");
        assert!(load_manifest(&dup).unwrap_err().to_string().contains("duplicate"));

        let bad_date = write_manifest(dir.path(), "v1\t7 July 2001\ta\n");
        assert!(load_manifest(&bad_date).unwrap_err().to_string().contains("bad date"));

        let spaces = write_manifest(dir.path(), "v1 2001-01-01 a\n");
        assert!(load_manifest(&spaces).is_err());

        assert!(load_manifest(&dir.path().join("absent.tsv")).is_err());
    }

    #[test]
    fn identical_snapshots_give_identical_rows() {
        let dir = tempfile::tempdir().unwrap();
        let root = demo_root();
        let m = write_manifest(
            dir.path(),
            &format!("0.8.0\t2005-01-01\t{0}\n0.8.1\t2005-02-01\t{0}\n", root.display()),
        );
        let table = analyze_series(&load_manifest(&m).unwrap(), &ExtractionConfig::default()).unwrap();
        assert_eq!(table.rows.len(), 2);
        let (a, b) = (&table.rows[0], &table.rows[1]);
        assert_eq!(a.values(), b.values());
        assert!((a.m_i - 0.41537676132245477).abs() < 1e-9);
    }

    #[test]
    fn added_package_shows_in_packages_column() {
        let dir = tempfile::tempdir().unwrap();
        let v1 = dir.path().join("v1");
        fs::create_dir_all(v1.join("a")).unwrap();
        fs::write(v1.join("a/A.java"), "package a;\nclass A { A self; }\n").unwrap();
        let v2 = dir.path().join("v2");
        fs::create_dir_all(v2.join("b")).unwrap();
        fs::create_dir_all(v2.join("a")).unwrap();
        fs::write(v2.join("a/A.java"), "package a;\nclass A { A self; }\n").unwrap();
        fs::write(v2.join("b/B.java"), "package b;\nclass B { a.A x; }\n").unwrap();
        let m = write_manifest(dir.path(), "one\t2001-01-01\tv1\ntwo\t2001-02-01\tv2\n");
        let table = analyze_series(&load_manifest(&m).unwrap(), &ExtractionConfig::default()).unwrap();
        assert_eq!(table.rows[1].packages, table.rows[0].packages + 1);
    }

    #[test]
    fn rows_match_standalone_analysis() {
        let entry = VersionEntry {
            label: "x".into(),
            release_date: NaiveDate::from_ymd_opt(2010, 1, 1).unwrap(),
            source_root: demo_root(),
        };
        let config = ExtractionConfig::default();
        let series = VersionSeries {
            project_name: "demo".into(),
            entries: vec![entry.clone()],
        };
        let table = analyze_series(&series, &config).unwrap();
        let project = extract_project(&demo_root(), &config).unwrap();
        let standalone = analyze_system(&project, &config).unwrap();
        assert_eq!(table.rows[0], EvolutionRow::from_analysis("x", entry.release_date, &standalone));
    }

    #[test]
    fn failing_version_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("empty")).unwrap();
        let series = VersionSeries {
            project_name: "p".into(),
            entries: vec![
                VersionEntry {
                    label: "bad".into(),
                    release_date: NaiveDate::from_ymd_opt(2001, 1, 1).unwrap(),
                    source_root: dir.path().join("empty"),
                },
                VersionEntry {
                    label: "good".into(),
                    release_date: NaiveDate::from_ymd_opt(2002, 1, 1).unwrap(),
                    source_root: demo_root(),
                },
            ],
        };
        let table = analyze_series(&series, &ExtractionConfig::default()).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.failures.len(), 1);
        assert_eq!(table.failures[0].label, "bad");
        assert!(table.has_errors());

        let all_bad = VersionSeries {
            project_name: "p".into(),
            entries: vec![series.entries[0].clone()],
        };
        assert!(matches!(
            analyze_series(&all_bad, &ExtractionConfig::default()),
            Err(Error::AllVersionsFailed(1))
        ));
    }

    #[test]
    fn growth_of_published_series() {
        let rows = [row("0.4", 5835, 9, 104), row("mid", 30000, 30, 500), row("0.8.0", 65408, 50, 898)];
        let g = growth_summary(&rows).unwrap();
        let get = |m: &str| g.iter().find(|x| x.metric == m).unwrap().ratio.unwrap();
        assert!((get("ncloc") - 65408.0 / 5835.0).abs() < 1e-9);
        assert!((11.0..=11.3).contains(&get("ncloc")));
        assert!((get("packages") - 50.0 / 9.0).abs() < 1e-9);
        assert!((get("classes") - 898.0 / 104.0).abs() < 1e-9);
        let functions = g.iter().find(|x| x.metric == "functions").unwrap();
        assert_eq!(functions.ratio, None);
        assert_eq!(g.len(), 10);
    }

    #[test]
    fn growth_needs_two_rows() {
        assert!(matches!(growth_summary(&[]), Err(Error::TooFewRows)));
        assert!(matches!(growth_summary(&[row("a", 1, 1, 1)]), Err(Error::TooFewRows)));
    }
}
