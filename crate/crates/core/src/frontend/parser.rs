//! Tolerant declaration parser.
//!
//! Works on the token stream from the lexer using brace matching and a
//! handful of declaration patterns. It never rejects a file for grammar
//! reasons; the only fatal condition is unbalanced braces, since every span
//! below depends on brace matching.

use std::ops::Range;

use crate::diagnostic::Diagnostic;
use crate::model::ClassKind;

use super::lexer::{is_keyword, Token};
use super::source::SourceFile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    /// Dotted path without the trailing `.*`.
    pub path: String,
    pub is_static: bool,
    pub wildcard: bool,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub param_types: Vec<String>,
    pub param_names: Vec<String>,
    pub is_constructor: bool,
    pub line: u32,
    pub name_token: usize,
    /// Tokens strictly between the body braces; `None` for abstract or
    /// interface signatures.
    pub body: Option<Range<usize>>,
}

impl FunctionDecl {
    /// `name(T1,T2)`; the key used to tell overloads apart.
    pub fn signature(&self) -> String {
        format!("{}({})", self.name, self.param_types.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeOrigin {
    /// Top-level or member type with a stable qualified name.
    Member,
    /// Class declared inside a function or initializer body.
    Local,
    /// `new T() { ... }` or an enum constant body.
    Anonymous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    /// Declared simple name; empty for anonymous classes.
    pub name: String,
    pub kind: ClassKind,
    pub origin: TypeOrigin,
    /// Tokens of the whole declaration: modifiers, header, body braces.
    pub tokens: Range<usize>,
    pub start_line: u32,
    pub end_line: u32,
    pub name_token: Option<usize>,
    pub fields: Vec<FieldDecl>,
    pub functions: Vec<FunctionDecl>,
    /// Member, local and anonymous types declared inside this one.
    pub nested: Vec<TypeDecl>,
    /// For local and anonymous types: index of the enclosing function in the
    /// parent's `functions`, if declared inside one.
    pub declared_in: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompilationUnit {
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub types: Vec<TypeDecl>,
}

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
];

/// Parses declarations out of a tokenized file. Fails only when braces are
/// unbalanced, in which case the returned diagnostic explains where.
pub fn parse_compilation_unit(file: &SourceFile) -> Result<CompilationUnit, Diagnostic> {
    let tokens = &file.tokens;
    let matching = match_brackets(tokens).map_err(|line| {
        Diagnostic::error("unbalanced braces; file skipped").at(&file.path, line)
    })?;
    let mut parser = Parser {
        tokens,
        matching,
        unit: CompilationUnit::default(),
    };
    parser.parse_unit();
    Ok(parser.unit)
}

/// Pairs up `{}` (strictly) and `()` / `[]` (best effort). Unmatched parens
/// and brackets map to `usize::MAX`; an unmatched brace is an error carrying
/// the offending line.
fn match_brackets(tokens: &[Token]) -> Result<Vec<usize>, u32> {
    let mut matching = vec![usize::MAX; tokens.len()];
    let mut braces: Vec<usize> = Vec::new();
    let mut others: Vec<usize> = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.is_punct('{') {
            braces.push(i);
        } else if t.is_punct('}') {
            let open = braces.pop().ok_or(t.line)?;
            matching[open] = i;
            matching[i] = open;
            // parens left open inside the block stay unmatched
            while others.last().is_some_and(|&o| o > open) {
                others.pop();
            }
        } else if t.is_punct('(') || t.is_punct('[') {
            others.push(i);
        } else if t.is_punct(')') || t.is_punct(']') {
            let want = if t.is_punct(')') { '(' } else { '[' };
            if let Some(&open) = others.last() {
                if tokens[open].is_punct(want) {
                    others.pop();
                    matching[open] = i;
                    matching[i] = open;
                }
            }
        }
    }
    match braces.first() {
        Some(&open) => Err(tokens[open].line),
        None => Ok(matching),
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    matching: Vec<usize>,
    unit: CompilationUnit,
}

impl<'a> Parser<'a> {
    fn tok(&self, i: usize) -> Option<&'a Token> {
        self.tokens.get(i)
    }

    fn is_punct(&self, i: usize, c: char) -> bool {
        self.tok(i).is_some_and(|t| t.is_punct(c))
    }

    fn is_word(&self, i: usize, w: &str) -> bool {
        self.tok(i).is_some_and(|t| t.is_word(w))
    }

    fn is_name(&self, i: usize) -> bool {
        self.tok(i).is_some_and(|t| t.is_name())
    }

    /// Index just past the closer matched with the opener at `i`, or `end`
    /// when the opener is unmatched.
    fn skip_group(&self, i: usize, end: usize) -> usize {
        match self.matching[i] {
            usize::MAX => end,
            close => (close + 1).min(end),
        }
    }

    fn parse_unit(&mut self) {
        let end = self.tokens.len();
        let mut i = 0;
        let mut decl_start: Option<usize> = None;
        while i < end {
            let t = &self.tokens[i];
            if t.is_word("package") {
                let (name, next) = self.dotted_name(i + 1, end);
                self.unit.package = Some(name);
                i = self.skip_past_semicolon(next, end);
                decl_start = None;
            } else if t.is_word("import") {
                i = self.parse_import(i, end);
                decl_start = None;
            } else if let Some((kind, kw)) = self.type_keyword_at(i) {
                let start = decl_start.take().unwrap_or(i);
                match self.parse_type_decl(start, kw, kind, TypeOrigin::Member, end) {
                    Some((decl, next)) => {
                        self.unit.types.push(decl);
                        i = next;
                    }
                    None => i = kw + 1,
                }
            } else if t.is_punct('@') {
                decl_start.get_or_insert(i);
                i = self.skip_annotation(i, end);
            } else if self.is_modifier(i) {
                decl_start.get_or_insert(i);
                i = self.skip_modifier(i);
            } else if t.is_punct('{') {
                i = self.skip_group(i, end);
                decl_start = None;
            } else {
                i += 1;
                decl_start = None;
            }
        }
    }

    fn parse_import(&mut self, at: usize, end: usize) -> usize {
        let line = self.tokens[at].line;
        let mut i = at + 1;
        let is_static = self.is_word(i, "static");
        if is_static {
            i += 1;
        }
        let (path, mut next) = self.dotted_name(i, end);
        let mut wildcard = false;
        if self.is_punct(next, '.') && self.is_punct(next + 1, '*') {
            wildcard = true;
            next += 2;
        }
        if !path.is_empty() {
            self.unit.imports.push(Import {
                path,
                is_static,
                wildcard,
                line,
            });
        }
        self.skip_past_semicolon(next, end)
    }

    /// Reads `a.b.c` starting at `i`; returns the name and the index after it.
    fn dotted_name(&self, mut i: usize, end: usize) -> (String, usize) {
        let mut name = String::new();
        while i < end && self.tokens[i].is_ident() {
            name.push_str(&self.tokens[i].text);
            if self.is_punct(i + 1, '.') && self.tok(i + 2).is_some_and(Token::is_ident) {
                name.push('.');
                i += 2;
            } else {
                i += 1;
                break;
            }
        }
        (name, i)
    }

    fn skip_past_semicolon(&self, mut i: usize, end: usize) -> usize {
        while i < end {
            if self.tokens[i].is_punct(';') {
                return i + 1;
            }
            if self.tokens[i].is_punct('{') || self.tokens[i].is_punct('}') {
                return i;
            }
            i += 1;
        }
        end
    }

    fn is_modifier(&self, i: usize) -> bool {
        let Some(t) = self.tok(i) else { return false };
        if !t.is_ident() {
            return false;
        }
        if MODIFIERS.contains(&t.text.as_str()) {
            // `default:` in a switch and `default` values are not modifiers
            return !(t.text == "default" && (self.is_punct(i + 1, ':') || self.is_punct(i + 1, '-')));
        }
        t.text == "non" && self.is_punct(i + 1, '-') && self.is_word(i + 2, "sealed")
    }

    fn skip_modifier(&self, i: usize) -> usize {
        if self.is_word(i, "non") {
            i + 3
        } else {
            i + 1
        }
    }

    /// Skips `@Name`, `@a.b.Name` and `@Name(...)`.
    fn skip_annotation(&self, at: usize, end: usize) -> usize {
        let (_, mut i) = self.dotted_name(at + 1, end);
        if i == at + 1 {
            return at + 1;
        }
        if self.is_punct(i, '(') {
            i = self.skip_group(i, end);
        }
        i
    }

    /// Recognizes the keyword that introduces a type declaration at `i`.
    /// Returns the kind and the index of the keyword token that precedes
    /// the type name.
    fn type_keyword_at(&self, i: usize) -> Option<(ClassKind, usize)> {
        let t = self.tok(i)?;
        if i > 0 && self.is_punct(i - 1, '.') {
            return None; // `Foo.class` literal
        }
        if t.is_punct('@') && self.is_word(i + 1, "interface") && self.is_name(i + 2) {
            return Some((ClassKind::Interface, i + 1));
        }
        if !t.is_ident() || !self.is_name(i + 1) {
            return None;
        }
        match t.text.as_str() {
            "class" => Some((ClassKind::Class, i)),
            "interface" => Some((ClassKind::Interface, i)),
            "enum" => Some((ClassKind::Enum, i)),
            "record" if self.is_punct(i + 2, '(') || self.is_punct(i + 2, '<') => {
                Some((ClassKind::Class, i))
            }
            _ => None,
        }
    }

    /// Parses a named type declaration whose keyword sits at `kw`.
    fn parse_type_decl(
        &self,
        start: usize,
        kw: usize,
        kind: ClassKind,
        origin: TypeOrigin,
        end: usize,
    ) -> Option<(TypeDecl, usize)> {
        let name_token = kw + 1;
        let name = self.tokens[name_token].text.clone();
        let is_record = self.is_word(kw, "record");

        let mut record_components = Vec::new();
        let mut i = name_token + 1;
        while i < end {
            let t = &self.tokens[i];
            if t.is_punct('{') {
                break;
            }
            if t.is_punct(';') || t.is_punct('}') {
                return None;
            }
            if t.is_punct('(') {
                if is_record && record_components.is_empty() {
                    let close = self.matching[i];
                    if close != usize::MAX {
                        record_components = self.parameters(i + 1, close).1;
                    }
                }
                i = self.skip_group(i, end);
                continue;
            }
            i += 1;
        }
        if i >= end {
            return None;
        }
        let open = i;
        let close = self.matching[open];

        let mut decl = TypeDecl {
            name,
            kind,
            origin,
            tokens: start..close + 1,
            start_line: self.tokens[start].line,
            end_line: self.tokens[close].line,
            name_token: Some(name_token),
            fields: record_components
                .into_iter()
                .map(|(name, line)| FieldDecl { name, line })
                .collect(),
            functions: Vec::new(),
            nested: Vec::new(),
            declared_in: None,
        };
        self.parse_class_body(&mut decl, open + 1, close);
        Some((decl, close + 1))
    }

    /// Parses an anonymous class body whose opening brace is at `open`.
    fn parse_anonymous(&self, start: usize, open: usize) -> TypeDecl {
        let close = self.matching[open];
        let mut decl = TypeDecl {
            name: String::new(),
            kind: ClassKind::Class,
            origin: TypeOrigin::Anonymous,
            tokens: start..close + 1,
            start_line: self.tokens[start].line,
            end_line: self.tokens[close].line,
            name_token: None,
            fields: Vec::new(),
            functions: Vec::new(),
            nested: Vec::new(),
            declared_in: None,
        };
        self.parse_class_body(&mut decl, open + 1, close);
        decl
    }

    fn parse_class_body(&self, decl: &mut TypeDecl, body_start: usize, body_end: usize) {
        let mut i = body_start;
        if decl.kind == ClassKind::Enum {
            i = self.parse_enum_constants(decl, i, body_end);
        }

        let mut member_start: Option<usize> = None;
        while i < body_end {
            let t = &self.tokens[i];
            if t.is_punct(';') {
                i += 1;
                member_start = None;
            } else if t.is_punct('{') {
                // instance or static initializer
                let close = self.skip_group(i, body_end);
                self.collect_inner_types(decl, i + 1, close - 1, None);
                i = close;
                member_start = None;
            } else if let Some((kind, kw)) = self.type_keyword_at(i) {
                let start = member_start.take().unwrap_or(i);
                match self.parse_type_decl(start, kw, kind, TypeOrigin::Member, body_end) {
                    Some((nested, next)) => {
                        decl.nested.push(nested);
                        i = next;
                    }
                    None => i = kw + 1,
                }
            } else if t.is_punct('@') {
                member_start.get_or_insert(i);
                i = self.skip_annotation(i, body_end);
            } else if self.is_modifier(i) {
                member_start.get_or_insert(i);
                i = self.skip_modifier(i);
            } else if t.is_punct('<') {
                // generic method type parameters
                i = self.skip_angles(i, body_end);
            } else {
                i = self.parse_member(decl, i, body_end);
                member_start = None;
            }
        }
    }

    /// Enum constants up to the first top-level `;`, each recorded as a
    /// field. Constant bodies are anonymous classes.
    fn parse_enum_constants(&self, decl: &mut TypeDecl, mut i: usize, end: usize) -> usize {
        while i < end {
            let t = &self.tokens[i];
            if t.is_punct(';') {
                return i + 1;
            }
            if t.is_punct('@') {
                i = self.skip_annotation(i, end);
                continue;
            }
            if t.is_punct(',') {
                i += 1;
                continue;
            }
            if !t.is_name() {
                // not a constant list after all (e.g. `enum E { ; ... }` handled above)
                return i;
            }
            let start = i;
            decl.fields.push(FieldDecl {
                name: t.text.clone(),
                line: t.line,
            });
            i += 1;
            if self.is_punct(i, '(') {
                i = self.skip_group(i, end);
            }
            if self.is_punct(i, '{') {
                let anon = self.parse_anonymous(start, i);
                i = self.skip_group(i, end);
                decl.nested.push(anon);
            }
            if !(self.is_punct(i, ',') || self.is_punct(i, ';') || i >= end) {
                return i;
            }
        }
        i
    }

    fn skip_angles(&self, at: usize, end: usize) -> usize {
        let mut depth = 0usize;
        let mut i = at;
        while i < end {
            let t = &self.tokens[i];
            if t.is_punct('<') {
                depth += 1;
            } else if t.is_punct('>') {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    return i + 1;
                }
            } else if t.is_punct(';') || t.is_punct('{') || t.is_punct('}') || t.is_punct('(') {
                return i;
            }
            i += 1;
        }
        end
    }

    /// Parses one method, constructor or field declaration starting at `at`.
    fn parse_member(&self, decl: &mut TypeDecl, at: usize, end: usize) -> usize {
        // compact record constructor: `Name {`
        if self.tokens[at].is_word(&decl.name) && self.is_punct(at + 1, '{') {
            let close = self.skip_group(at + 1, end);
            let function = FunctionDecl {
                name: decl.name.clone(),
                param_types: Vec::new(),
                param_names: Vec::new(),
                is_constructor: true,
                line: self.tokens[at].line,
                name_token: at,
                body: Some(at + 2..close - 1),
            };
            self.push_function(decl, function);
            return close;
        }

        let mut angle = 0usize;
        let mut i = at;
        while i < end {
            let t = &self.tokens[i];
            if t.is_punct('<') {
                angle += 1;
            } else if t.is_punct('>') {
                angle = angle.saturating_sub(1);
            } else if t.is_punct('[') {
                i = self.skip_group(i, end);
                continue;
            } else if t.is_punct('(') && angle == 0 {
                if i > at && self.tokens[i - 1].is_name() {
                    return self.parse_function(decl, i - 1, end);
                }
                return self.skip_statement(i, end);
            } else if angle == 0 && (t.is_punct('=') || t.is_punct(';') || t.is_punct(',')) {
                return self.parse_field(decl, at, end);
            } else if t.is_punct('{') || t.is_punct('}') {
                // unrecognized construct; resynchronize at the brace
                return if t.is_punct('{') { self.skip_group(i, end) } else { i + 1 };
            }
            i += 1;
        }
        end
    }

    fn skip_statement(&self, mut i: usize, end: usize) -> usize {
        while i < end {
            let t = &self.tokens[i];
            if t.is_punct(';') {
                return i + 1;
            }
            if t.is_punct('(') || t.is_punct('[') || t.is_punct('{') {
                i = self.skip_group(i, end);
                continue;
            }
            if t.is_punct('}') {
                return i;
            }
            i += 1;
        }
        end
    }

    fn parse_function(&self, decl: &mut TypeDecl, name_token: usize, end: usize) -> usize {
        let open = name_token + 1;
        let close = self.matching[open];
        if close == usize::MAX || close >= end {
            return self.skip_statement(open, end);
        }
        let (param_types, params) = self.parameters(open + 1, close);
        let name = self.tokens[name_token].text.clone();
        let is_constructor = name == decl.name;

        let mut i = close + 1;
        let mut in_default_value = false;
        let mut body = None;
        while i < end {
            let t = &self.tokens[i];
            if t.is_punct(';') {
                i += 1;
                break;
            }
            if t.is_word("default") {
                in_default_value = true;
            } else if t.is_punct('{') {
                let body_close = self.skip_group(i, end);
                if in_default_value {
                    i = body_close;
                    continue;
                }
                body = Some(i + 1..body_close - 1);
                i = body_close;
                break;
            } else if t.is_punct('(') {
                i = self.skip_group(i, end);
                continue;
            } else if t.is_punct('}') {
                break;
            }
            i += 1;
        }

        let function = FunctionDecl {
            name,
            param_types,
            param_names: params.into_iter().map(|(n, _)| n).collect(),
            is_constructor,
            line: self.tokens[name_token].line,
            name_token,
            body,
        };
        let index = self.push_function(decl, function);
        if let Some(body) = decl.functions[index].body.clone() {
            self.collect_inner_types(decl, body.start, body.end, Some(index));
        }
        i
    }

    fn push_function(&self, decl: &mut TypeDecl, function: FunctionDecl) -> usize {
        decl.functions.push(function);
        decl.functions.len() - 1
    }

    /// Splits a parameter list into (types, (name, line)).
    fn parameters(&self, start: usize, end: usize) -> (Vec<String>, Vec<(String, u32)>) {
        let mut types = Vec::new();
        let mut names = Vec::new();
        let mut segment_start = start;
        let mut depth = 0i32;
        let mut i = start;
        while i <= end {
            let at_end = i == end;
            if !at_end {
                let t = &self.tokens[i];
                if t.is_punct('<') || t.is_punct('(') {
                    depth += 1;
                } else if t.is_punct('>') || t.is_punct(')') {
                    depth -= 1;
                }
            }
            if at_end || (depth == 0 && self.tokens[i].is_punct(',')) {
                if let Some((ty, name, line)) = self.parameter(segment_start, i) {
                    if name != "this" {
                        types.push(ty);
                        names.push((name, line));
                    }
                }
                segment_start = i + 1;
            }
            i += 1;
        }
        (types, names)
    }

    fn parameter(&self, start: usize, end: usize) -> Option<(String, String, u32)> {
        let mut i = start;
        // leading annotations and `final`
        loop {
            if i < end && self.tokens[i].is_punct('@') {
                i = self.skip_annotation(i, end);
            } else if i < end && self.tokens[i].is_word("final") {
                i += 1;
            } else {
                break;
            }
        }
        let mut name_at = None;
        for k in (i..end).rev() {
            if self.tokens[k].is_ident() {
                name_at = Some(k);
                break;
            }
        }
        let name_at = name_at?;
        let mut ty = String::new();
        for k in i..name_at {
            ty.push_str(&token_text(&self.tokens[k]));
        }
        // C-style array suffix: `int a[]`
        for k in name_at + 1..end {
            ty.push_str(&token_text(&self.tokens[k]));
        }
        if ty.is_empty() {
            // lambda-style parameter without a type; not a declaration
            return None;
        }
        Some((ty, self.tokens[name_at].text.clone(), self.tokens[name_at].line))
    }

    /// Field declaration `Type a = init, b, c[];` starting at `at`.
    fn parse_field(&self, decl: &mut TypeDecl, at: usize, end: usize) -> usize {
        let mut in_type = true;
        let mut angle = 0usize;
        let mut i = at;
        let mut init_start: Option<usize> = None;
        while i < end {
            let t = &self.tokens[i];
            let boundary = t.is_punct('=') || t.is_punct(',') || t.is_punct(';') || t.is_punct('[');
            if in_type {
                if t.is_punct('<') {
                    angle += 1;
                } else if t.is_punct('>') {
                    angle = angle.saturating_sub(1);
                } else if boundary && angle == 0 {
                    if i > at && self.tokens[i - 1].is_name() {
                        decl.fields.push(FieldDecl {
                            name: self.tokens[i - 1].text.clone(),
                            line: self.tokens[i - 1].line,
                        });
                    }
                    if t.is_punct('[') {
                        i = self.skip_group(i, end);
                        continue;
                    }
                    if t.is_punct('=') {
                        in_type = false;
                        init_start = Some(i + 1);
                    }
                }
            } else if t.is_punct(',')
                && self.is_name(i + 1)
                && self
                    .tok(i + 2)
                    .is_some_and(|n| n.is_punct('=') || n.is_punct(',') || n.is_punct(';') || n.is_punct('['))
            {
                if let Some(s) = init_start.take() {
                    self.collect_inner_types(decl, s, i, None);
                }
                // next declarator: re-enter type mode so its name is captured
                in_type = true;
                i += 1;
                continue;
            }
            if t.is_punct(';') {
                if let Some(s) = init_start.take() {
                    self.collect_inner_types(decl, s, i, None);
                }
                return i + 1;
            }
            if t.is_punct('(') || (!in_type && (t.is_punct('{') || t.is_punct('['))) {
                i = self.skip_group(i, end);
                continue;
            }
            if t.is_punct('{') || t.is_punct('}') {
                return i;
            }
            i += 1;
        }
        end
    }

    /// Finds local and anonymous class declarations inside a code region
    /// and attaches them to `decl`.
    fn collect_inner_types(
        &self,
        decl: &mut TypeDecl,
        start: usize,
        end: usize,
        declared_in: Option<usize>,
    ) {
        let mut i = start;
        while i < end {
            let t = &self.tokens[i];
            if t.is_word("new") {
                if let Some(open) = self.anonymous_body_after_new(i, end) {
                    let mut anon = self.parse_anonymous(i, open);
                    anon.declared_in = declared_in;
                    decl.nested.push(anon);
                    i = self.skip_group(open, end);
                    continue;
                }
            } else if let Some((kind, kw)) = self.type_keyword_at(i) {
                if let Some((mut local, next)) =
                    self.parse_type_decl(i, kw, kind, TypeOrigin::Local, end)
                {
                    local.declared_in = declared_in;
                    decl.nested.push(local);
                    i = next;
                    continue;
                }
            }
            i += 1;
        }
    }

    /// `new a.b.T<..>(args) {` → index of the `{`.
    fn anonymous_body_after_new(&self, at: usize, end: usize) -> Option<usize> {
        let mut i = at + 1;
        while i < end && self.tokens[i].is_punct('@') {
            i = self.skip_annotation(i, end);
        }
        let (name, mut next) = self.dotted_name(i, end);
        if name.is_empty() || is_keyword(&name) {
            return None;
        }
        if self.is_punct(next, '<') {
            next = self.skip_angles(next, end);
        }
        if !self.is_punct(next, '(') {
            return None;
        }
        let after = self.skip_group(next, end);
        (after < end && self.is_punct(after, '{')).then_some(after)
    }
}

fn token_text(t: &Token) -> String {
    match t.kind {
        super::lexer::TokenKind::Ident => t.text.clone(),
        super::lexer::TokenKind::Punct(c) => c.to_string(),
        _ => String::new(),
    }
}
