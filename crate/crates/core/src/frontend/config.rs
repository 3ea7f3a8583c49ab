use std::path::Path;

use globset::{Glob, GlobSet, GlobSetBuilder};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SelfDependencyMode;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    /// Globs matched against paths relative to the analysis root. Empty
    /// means every `.java` file.
    pub include_globs: Vec<String>,
    pub exclude_globs: Vec<String>,
    pub count_constructors_as_functions: bool,
    pub fold_nested_classes: bool,
    pub self_dependency_mode: SelfDependencyMode,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            include_globs: Vec::new(),
            exclude_globs: Vec::new(),
            count_constructors_as_functions: true,
            fold_nested_classes: true,
            self_dependency_mode: SelfDependencyMode::TextualSelfReference,
        }
    }
}

impl ExtractionConfig {
    /// Parses a `key = value` file. Blank lines and `#` comments are
    /// ignored; glob lists are comma separated.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Usage(format!("config line {}: {msg}", index + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "include_globs" => config.include_globs = split_list(value),
                "exclude_globs" => config.exclude_globs = split_list(value),
                "count_constructors_as_functions" => {
                    config.count_constructors_as_functions = parse_bool(value).map_err(bad)?
                }
                "fold_nested_classes" => {
                    config.fold_nested_classes = parse_bool(value).map_err(bad)?
                }
                "self_dependency_mode" => {
                    config.self_dependency_mode = value
                        .parse()
                        .map_err(|e: Error| bad(e.to_string()))?
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        config.file_filter()?;
        Ok(config)
    }

    pub fn file_filter(&self) -> Result<FileFilter> {
        Ok(FileFilter {
            include: if self.include_globs.is_empty() {
                None
            } else {
                Some(build_globs(&self.include_globs)?)
            },
            exclude: build_globs(&self.exclude_globs)?,
        })
    }
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("expected true or false, got `{other}`")),
    }
}

fn build_globs(patterns: &[String]) -> Result<GlobSet> {
    let mut builder = GlobSetBuilder::new();
    for pattern in patterns {
        let glob = Glob::new(pattern)
            .map_err(|e| Error::Usage(format!("invalid glob `{pattern}`: {e}")))?;
        builder.add(glob);
    }
    builder
        .build()
        .map_err(|e| Error::Usage(format!("invalid glob set: {e}")))
}

#[derive(Debug, Clone)]
pub struct FileFilter {
    include: Option<GlobSet>,
    exclude: GlobSet,
}

impl FileFilter {
    /// `relative` is the path below the analysis root.
    pub fn accepts(&self, relative: &Path) -> bool {
        if relative.extension().and_then(|e| e.to_str()) != Some("java") {
            return false;
        }
        if let Some(include) = &self.include {
            if !include.is_match(relative) {
                return false;
            }
        }
        !self.exclude.is_match(relative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ExtractionConfig::default();
        assert!(c.count_constructors_as_functions);
        assert!(c.fold_nested_classes);
        assert_eq!(c.self_dependency_mode, SelfDependencyMode::TextualSelfReference);
    }

    #[test]
    fn parses_key_values() {
        let c = ExtractionConfig::from_key_values(
            "# comment\ninclude_globs = src/**, lib/**\nexclude_globs=**/test/**\n\
             count_constructors_as_functions = false\nfold_nested_classes = no\nself_dependency_mode = always\n",
        )
        .unwrap();
        assert_eq!(c.include_globs, vec!["src/**", "lib/**"]);
        assert_eq!(c.exclude_globs, vec!["**/test/**"]);
        assert!(!c.count_constructors_as_functions);
        assert!(!c.fold_nested_classes);
        assert_eq!(c.self_dependency_mode, SelfDependencyMode::Always);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExtractionConfig::from_key_values("colour = red").is_err());
        assert!(ExtractionConfig::from_key_values("fold_nested_classes = maybe").is_err());
        assert!(ExtractionConfig::from_key_values("exclude_globs = a/[").is_err());
        assert!(ExtractionConfig::from_key_values("just text").is_err());
    }

    #[test]
    fn filter_applies_globs_and_extension() {
        let c = ExtractionConfig {
            include_globs: vec!["src/**".into()],
            exclude_globs: vec!["**/Gen*.java".into()],
            ..Default::default()
        };
        let f = c.file_filter().unwrap();
        assert!(f.accepts(Path::new("src/a/A.java")));
        assert!(!f.accepts(Path::new("src/a/GenA.java")));
        assert!(!f.accepts(Path::new("test/B.java")));
        assert!(!f.accepts(Path::new("src/a/notes.txt")));
    }
}
