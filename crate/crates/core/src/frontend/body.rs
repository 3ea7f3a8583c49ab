//! Field-access and call facts from a single function body.
//!
//! There is no type inference. An unqualified identifier (or one qualified by
//! `this.`) that is not a parameter or a local variable is a field-access
//! candidate, and `name(args)` is a call candidate. The caller resolves both
//! against the fields and functions actually declared in the class.

use std::collections::{BTreeSet, HashSet};
use std::ops::Range;

use super::lexer::{is_keyword, is_primitive, Token};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CallSite {
    pub name: String,
    /// `None` for method references (`this::name`), where arity is unknown.
    pub arity: Option<usize>,
    /// `this(...)` delegation to another constructor.
    pub constructor: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BodyFacts {
    pub field_uses: BTreeSet<String>,
    pub calls: BTreeSet<CallSite>,
}

/// Words that can precede an expression identifier without declaring it.
fn is_statement_word(word: &str) -> bool {
    matches!(word, "yield" | "record" | "permits")
}

pub fn scan_body(
    tokens: &[Token],
    range: Range<usize>,
    skip: &[Range<usize>],
    params: &[String],
) -> BodyFacts {
    let visible: Vec<&Token> = range
        .clone()
        .filter(|i| !skip.iter().any(|r| r.contains(i)))
        .map(|i| &tokens[i])
        .collect();
    let scan = Scan { t: &visible };

    let mut locals: HashSet<&str> = params.iter().map(String::as_str).collect();
    let mut declaration_sites = HashSet::new();
    for p in 0..visible.len() {
        if scan.declares_local(p) {
            locals.insert(&visible[p].text);
            declaration_sites.insert(p);
        }
        if scan.punct(p, ')') && scan.punct(p + 1, '-') && scan.punct(p + 2, '>') {
            if let Some(open) = scan.matching_open_paren(p) {
                for token in &visible[open + 1..p] {
                    if token.is_name() {
                        locals.insert(&token.text);
                    }
                }
            }
        }
    }

    let mut facts = BodyFacts::default();
    for p in 0..visible.len() {
        let t = visible[p];

        if t.is_word("this") && scan.punct(p + 1, '(') && !scan.punct_before(p, '.') {
            facts.calls.insert(CallSite {
                name: String::new(),
                arity: Some(scan.arity(p + 1)),
                constructor: true,
            });
            continue;
        }
        if !t.is_name() || declaration_sites.contains(&p) {
            continue;
        }

        let this_qualified = scan.this_qualified(p);
        if scan.punct_before(p, '.') && !this_qualified {
            continue;
        }
        // method reference `this::name`
        if p >= 3 && scan.punct(p - 1, ':') && scan.punct(p - 2, ':') {
            if visible[p - 3].is_word("this") {
                facts.calls.insert(CallSite {
                    name: t.text.clone(),
                    arity: None,
                    constructor: false,
                });
            }
            continue;
        }
        if scan.punct(p + 1, '(') {
            if p > 0 && visible[p - 1].is_word("new") {
                continue;
            }
            facts.calls.insert(CallSite {
                name: t.text.clone(),
                arity: Some(scan.arity(p + 1)),
                constructor: false,
            });
            continue;
        }
        // type position: `Type name`, `Type[] name`
        if visible.get(p + 1).is_some_and(|n| n.is_name())
            || (scan.punct(p + 1, '[') && scan.punct(p + 2, ']'))
        {
            continue;
        }
        if this_qualified || !locals.contains(t.text.as_str()) {
            facts.field_uses.insert(t.text.clone());
        }
    }
    facts
}

struct Scan<'a> {
    t: &'a [&'a Token],
}

impl Scan<'_> {
    fn punct(&self, p: usize, c: char) -> bool {
        self.t.get(p).is_some_and(|t| t.is_punct(c))
    }

    fn punct_before(&self, p: usize, c: char) -> bool {
        p > 0 && self.t[p - 1].is_punct(c)
    }

    fn this_qualified(&self, p: usize) -> bool {
        p >= 2 && self.t[p - 1].is_punct('.') && self.t[p - 2].is_word("this")
    }

    /// Heuristic: `Type name =`, `Type name;`, `Type name :` (for-each),
    /// `Type name)` (catch, pattern), `Type name,`, and `name ->` (lambda).
    fn declares_local(&self, p: usize) -> bool {
        let t = self.t[p];
        if !t.is_name() {
            return false;
        }
        if self.punct(p + 1, '-') && self.punct(p + 2, '>') && !self.punct_before(p, '.') {
            return true;
        }
        let terminator = [';', '=', ',', ':', ')']
            .iter()
            .any(|&c| self.punct(p + 1, c));
        // `a == b` and `x : y` in ternaries are not declarations
        if !terminator
            || (self.punct(p + 1, '=') && self.punct(p + 2, '='))
            || (self.punct(p + 1, ':') && self.punct(p + 2, ':'))
        {
            return false;
        }
        if p == 0 {
            return false;
        }
        let prev = self.t[p - 1];
        if prev.is_ident() {
            let w = prev.text.as_str();
            return (!is_keyword(w) || is_primitive(w)) && !is_statement_word(w);
        }
        if prev.is_punct(']') {
            return p >= 2 && self.t[p - 2].is_punct('[');
        }
        if prev.is_punct('>') {
            return self.closes_type_arguments(p - 1);
        }
        false
    }

    /// Whether the `>` at `close` ends a generic argument list (`List<T>`)
    /// rather than being a comparison.
    fn closes_type_arguments(&self, close: usize) -> bool {
        let mut depth = 0i32;
        let mut k = close;
        loop {
            let t = self.t[k];
            if t.is_punct('>') {
                depth += 1;
            } else if t.is_punct('<') {
                depth -= 1;
                if depth == 0 {
                    return k > 0 && self.t[k - 1].is_ident();
                }
            } else if !(t.is_ident() || t.is_punct('.') || t.is_punct(',') || t.is_punct('?')
                || t.is_punct('[') || t.is_punct(']') || t.is_punct('&'))
            {
                return false;
            }
            if k == 0 {
                return false;
            }
            k -= 1;
        }
    }

    fn matching_open_paren(&self, close: usize) -> Option<usize> {
        let mut depth = 0i32;
        for k in (0..=close).rev() {
            if self.t[k].is_punct(')') {
                depth += 1;
            } else if self.t[k].is_punct('(') {
                depth -= 1;
                if depth == 0 {
                    return Some(k);
                }
            }
        }
        None
    }

    /// Number of top-level arguments in the call whose `(` is at `open`.
    fn arity(&self, open: usize) -> usize {
        let mut depth = 0i32;
        let mut commas = 0;
        let mut empty = true;
        for k in open..self.t.len() {
            let t = self.t[k];
            if t.is_punct('(') || t.is_punct('[') || t.is_punct('{') {
                depth += 1;
            } else if t.is_punct(')') || t.is_punct(']') || t.is_punct('}') {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            } else if depth == 1 && t.is_punct(',') {
                commas += 1;
            }
            if k > open && depth >= 1 {
                empty = false;
            }
        }
        if empty {
            0
        } else {
            commas + 1
        }
    }
}
