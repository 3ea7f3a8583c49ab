use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};

use super::lexer::{self, LexIssue, Token};

/// Per-line code classification of a source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineClassification {
    /// `has_code[n]` describes line `n + 1`.
    pub has_code: Vec<bool>,
    pub diagnostics: Vec<Diagnostic>,
}

impl LineClassification {
    pub fn code_line_count(&self) -> usize {
        self.has_code.iter().filter(|&&c| c).count()
    }
}

/// Classifies each line as code or not, ignoring comments, blank lines,
/// and comment markers that sit inside string or char literals.
pub fn strip_comments(raw_text: &str) -> LineClassification {
    let lexed = lexer::lex(raw_text);
    LineClassification {
        has_code: lexed.code_lines,
        diagnostics: lexed
            .issues
            .iter()
            .map(|issue| issue_diagnostic(issue, None))
            .collect(),
    }
}

fn issue_diagnostic(issue: &LexIssue, path: Option<&Path>) -> Diagnostic {
    let (line, message) = match issue {
        LexIssue::UnterminatedBlockComment { line } => {
            (*line, "unterminated block comment runs to end of file")
        }
        LexIssue::UnterminatedTextBlock { line } => {
            (*line, "unterminated text block runs to end of file")
        }
    };
    let d = Diagnostic::warning(message);
    match path {
        Some(p) => d.at(p, line),
        None => d,
    }
}

/// A tokenized Java source file.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: PathBuf,
    /// Declared package, empty when the file has no `package` clause.
    pub package_name: String,
    pub raw_text: String,
    pub code_lines: Vec<bool>,
    pub tokens: Vec<Token>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SourceFile {
    pub fn new(path: impl Into<PathBuf>, raw_text: impl Into<String>) -> Self {
        let path = path.into();
        let raw_text = raw_text.into();
        let lexed = lexer::lex(&raw_text);
        let diagnostics = lexed
            .issues
            .iter()
            .map(|issue| issue_diagnostic(issue, Some(&path)))
            .collect();
        let package_name = declared_package(&lexed.tokens).unwrap_or_default();
        Self {
            path,
            package_name,
            raw_text,
            code_lines: lexed.code_lines,
            tokens: lexed.tokens,
            diagnostics,
        }
    }

    pub fn line_count(&self) -> u32 {
        self.code_lines.len() as u32
    }
}

/// Reads the `package a.b.c;` clause, skipping any leading annotations.
fn declared_package(tokens: &[Token]) -> Option<String> {
    let start = tokens.iter().position(|t| t.is_word("package"))?;
    // `package` must come before any type declaration keyword
    if tokens[..start]
        .iter()
        .any(|t| t.is_word("class") || t.is_word("interface") || t.is_word("enum") || t.is_punct('{'))
    {
        return None;
    }
    let mut name = String::new();
    for t in &tokens[start + 1..] {
        if t.is_punct(';') {
            break;
        }
        if t.is_ident() {
            name.push_str(&t.text);
        } else if t.is_punct('.') {
            name.push('.');
        } else {
            break;
        }
    }
    (!name.is_empty()).then_some(name)
}

/// Counts code lines within a 1-based inclusive line span.
pub fn count_ncloc(file: &SourceFile, span: RangeInclusive<u32>) -> Result<u32> {
    let (start, end) = (*span.start(), *span.end());
    if start == 0 || start > end || end > file.line_count() {
        return Err(Error::Internal(format!(
            "line span {start}..={end} outside {} ({} lines)",
            file.path.display(),
            file.line_count()
        )));
    }
    Ok(file.code_lines[(start - 1) as usize..end as usize]
        .iter()
        .filter(|&&c| c)
        .count() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_with_blank_and_comment_lines() {
        let text = "a;\n\nb;\n// c\nd;\n\n/* e */\nf;\n\ng;\n";
        let file = SourceFile::new("T.java", text);
        assert_eq!(count_ncloc(&file, 1..=10).unwrap(), 5);
    }

    #[test]
    fn one_line_empty_class() {
        let file = SourceFile::new("A.java", "class A {}\n");
        assert_eq!(count_ncloc(&file, 1..=1).unwrap(), 1);
    }

    #[test]
    fn invalid_span_is_internal_error() {
        let file = SourceFile::new("A.java", "class A {}\n");
        assert!(matches!(count_ncloc(&file, 1..=2), Err(Error::Internal(_))));
        assert!(matches!(count_ncloc(&file, 0..=1), Err(Error::Internal(_))));
    }

    #[test]
    fn package_clause_after_annotation() {
        let file = SourceFile::new("x/package-info.java", "@Deprecated\npackage a.b.c;\n");
        assert_eq!(file.package_name, "a.b.c");
        assert_eq!(SourceFile::new("A.java", "class A {}").package_name, "");
    }

    #[test]
    fn unterminated_comment_warns() {
        let lc = strip_comments("int a;\n/* open\n");
        assert_eq!(lc.has_code, vec![true, false]);
        assert_eq!(lc.diagnostics.len(), 1);
    }
}
