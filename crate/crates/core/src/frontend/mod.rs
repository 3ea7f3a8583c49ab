//! Java source front end: discovers `.java` files, parses their structure
//! tolerantly and builds a [`Project`] model from them.

mod body;
mod config;
mod lexer;
mod parser;
mod resolve;
mod source;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};
use crate::model::Project;

pub use config::{ExtractionConfig, FileFilter};
pub use parser::{parse_compilation_unit, CompilationUnit};
pub use source::{count_ncloc, strip_comments, LineClassification, SourceFile};

use resolve::ParsedFile;

/// Extracts a project model from every accepted `.java` file under `root`.
///
/// Files are processed in parallel on the current rayon pool; the result
/// does not depend on the number of workers.
pub fn extract_project(root: &Path, config: &ExtractionConfig) -> Result<Project> {
    if !root.exists() {
        return Err(Error::Usage(format!(
            "source root `{}` does not exist",
            root.display()
        )));
    }
    let files = discover(root, config)?;
    if files.is_empty() {
        return Err(Error::NothingToAnalyze);
    }
    type Loaded = (PathBuf, Result<(String, Option<Diagnostic>)>);
    let loaded: Vec<Loaded> = files
        .par_iter()
        .map(|(absolute, relative)| (relative.clone(), read_source(absolute, relative)))
        .collect();

    let mut sources = Vec::with_capacity(loaded.len());
    let mut diagnostics = Vec::new();
    for (relative, outcome) in loaded {
        match outcome {
            Ok((text, warning)) => {
                diagnostics.extend(warning);
                sources.push((relative, text));
            }
            Err(e) => diagnostics.push(Diagnostic::error(format!("cannot read file: {e}")).at(&relative, 1)),
        }
    }
    let name = project_name(root);
    extract_inner(&name, sources, config, diagnostics)
}

/// Builds a project from in-memory sources. Paths are only used for
/// diagnostics; packages come from each file's `package` clause.
pub fn extract_from_sources(
    name: &str,
    sources: Vec<(PathBuf, String)>,
    config: &ExtractionConfig,
) -> Result<Project> {
    if sources.is_empty() {
        return Err(Error::NothingToAnalyze);
    }
    extract_inner(name, sources, config, Vec::new())
}

fn extract_inner(
    name: &str,
    sources: Vec<(PathBuf, String)>,
    config: &ExtractionConfig,
    mut diagnostics: Vec<Diagnostic>,
) -> Result<Project> {
    let parsed: Vec<(SourceFile, std::result::Result<CompilationUnit, Diagnostic>)> = sources
        .into_par_iter()
        .map(|(path, text)| {
            let source = SourceFile::new(path, text);
            let unit = parse_compilation_unit(&source);
            (source, unit)
        })
        .collect();

    let mut files = Vec::with_capacity(parsed.len());
    for (mut source, unit) in parsed {
        diagnostics.append(&mut source.diagnostics);
        match unit {
            Ok(unit) => files.push(ParsedFile { source, unit }),
            Err(d) => diagnostics.push(d),
        }
    }
    if files.is_empty() {
        return Err(Error::NothingToAnalyze);
    }

    let mut project = resolve::build_project(name, &files, config, &mut diagnostics);
    project.diagnostics = diagnostics;
    Ok(project)
}

fn project_name(root: &Path) -> String {
    let canonical = root.canonicalize().unwrap_or_else(|_| root.to_path_buf());
    let base = if canonical.is_file() {
        canonical.file_stem()
    } else {
        canonical.file_name()
    };
    base.map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "project".to_string())
}

/// Returns (absolute, root-relative) pairs in a stable order.
fn discover(root: &Path, config: &ExtractionConfig) -> Result<Vec<(PathBuf, PathBuf)>> {
    let filter = config.file_filter()?;
    if root.is_file() {
        let name = PathBuf::from(root.file_name().unwrap_or_default());
        return Ok(if filter.accepts(&name) {
            vec![(root.to_path_buf(), name)]
        } else {
            Vec::new()
        });
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let relative = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .to_path_buf();
        if filter.accepts(&relative) {
            files.push((entry.path().to_path_buf(), relative));
        }
    }
    files.sort_by(|a, b| a.1.cmp(&b.1));
    Ok(files)
}

/// Reads a file as UTF-8, falling back to Latin-1 with a warning.
fn read_source(absolute: &Path, relative: &Path) -> Result<(String, Option<Diagnostic>)> {
    let bytes = std::fs::read(absolute).map_err(|e| Error::io(relative, e))?;
    match String::from_utf8(bytes) {
        Ok(text) => Ok((text.strip_prefix('\u{feff}').map(String::from).unwrap_or(text), None)),
        Err(e) => {
            let text = e.into_bytes().iter().map(|&b| b as char).collect();
            let warning = Diagnostic::warning("file is not valid UTF-8; decoded as Latin-1")
                .at(relative, 1);
            Ok((text, Some(warning)))
        }
    }
}
