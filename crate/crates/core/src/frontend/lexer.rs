//! Comment- and literal-aware tokenizer for Java source.
//!
//! Only the structure needed for metrics is kept: identifiers, single-char
//! punctuation and opaque literals. Multi-char operators come out as runs of
//! single punctuation tokens (`>>` is two `>` tokens), which keeps generic
//! brackets easy to match.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Punct(char),
    /// String, text block, or char literal.
    Literal,
    Number,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text for identifiers; empty for other kinds.
    pub text: String,
    /// 1-based line of the first character.
    pub line: u32,
    /// 1-based line of the last character.
    pub end_line: u32,
}

impl Token {
    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }

    pub fn is_punct(&self, c: char) -> bool {
        self.kind == TokenKind::Punct(c)
    }

    pub fn is_word(&self, word: &str) -> bool {
        self.kind == TokenKind::Ident && self.text == word
    }

    /// Identifier that is not a reserved word.
    pub fn is_name(&self) -> bool {
        self.is_ident() && !is_keyword(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexIssue {
    UnterminatedBlockComment { line: u32 },
    UnterminatedTextBlock { line: u32 },
}

#[derive(Debug, Clone, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    /// `code_lines[n]` is true when line `n + 1` holds at least one token.
    pub code_lines: Vec<bool>,
    pub issues: Vec<LexIssue>,
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

pub fn is_primitive(word: &str) -> bool {
    matches!(
        word,
        "boolean" | "byte" | "char" | "short" | "int" | "long" | "float" | "double" | "void" | "var"
    )
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: u32,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    /// Advances one character, tracking `\n`, `\r\n` and lone `\r` as line breaks.
    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        match c {
            '\n' => self.line += 1,
            '\r' if self.peek() != Some('\n') => self.line += 1,
            _ => {}
        }
        Some(c)
    }
}

fn line_count(src: &str) -> usize {
    let mut lines = 1;
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\n' => lines += 1,
            '\r' if chars.peek() != Some(&'\n') => lines += 1,
            _ => {}
        }
    }
    if src.ends_with('\n') || src.ends_with('\r') {
        lines -= 1;
    }
    lines
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

pub fn lex(src: &str) -> Lexed {
    let mut out = Lexed {
        tokens: Vec::new(),
        code_lines: vec![false; line_count(src)],
        issues: Vec::new(),
    };
    let mut cur = Cursor::new(src);

    while let Some(c) = cur.peek() {
        let line = cur.line;
        if c.is_whitespace() {
            cur.bump();
        } else if cur.starts_with("//") {
            while let Some(c) = cur.peek() {
                if c == '\n' || c == '\r' {
                    break;
                }
                cur.bump();
            }
        } else if cur.starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.peek().is_none() {
                    out.issues.push(LexIssue::UnterminatedBlockComment { line });
                    break;
                }
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                cur.bump();
            }
        } else if cur.starts_with("\"\"\"") {
            for _ in 0..3 {
                cur.bump();
            }
            loop {
                match cur.peek() {
                    None => {
                        out.issues.push(LexIssue::UnterminatedTextBlock { line });
                        break;
                    }
                    Some('\\') => {
                        cur.bump();
                        cur.bump();
                    }
                    Some(_) if cur.starts_with("\"\"\"") => {
                        for _ in 0..3 {
                            cur.bump();
                        }
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            push(&mut out, TokenKind::Literal, String::new(), line, cur.line);
        } else if c == '"' || c == '\'' {
            // Plain string and char literals cannot span lines; an unclosed
            // one ends at the line break.
            cur.bump();
            while let Some(d) = cur.peek() {
                if d == '\n' || d == '\r' {
                    break;
                }
                cur.bump();
                if d == '\\' {
                    if matches!(cur.peek(), Some(e) if e != '\n' && e != '\r') {
                        cur.bump();
                    }
                } else if d == c {
                    break;
                }
            }
            push(&mut out, TokenKind::Literal, String::new(), line, line);
        } else if c.is_ascii_digit() || (c == '.' && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            let mut prev = ' ';
            while let Some(d) = cur.peek() {
                let exponent_sign = (d == '+' || d == '-') && matches!(prev, 'e' | 'E' | 'p' | 'P');
                if d.is_ascii_alphanumeric() || d == '_' || d == '.' || exponent_sign {
                    prev = d;
                    cur.bump();
                } else {
                    break;
                }
            }
            push(&mut out, TokenKind::Number, String::new(), line, line);
        } else if is_ident_start(c) {
            let mut text = String::new();
            while let Some(d) = cur.peek() {
                if !is_ident_part(d) {
                    break;
                }
                text.push(d);
                cur.bump();
            }
            push(&mut out, TokenKind::Ident, text, line, line);
        } else {
            cur.bump();
            push(&mut out, TokenKind::Punct(c), String::new(), line, line);
        }
    }

    out
}

fn push(out: &mut Lexed, kind: TokenKind, text: String, line: u32, end_line: u32) {
    for l in line..=end_line {
        if let Some(flag) = out.code_lines.get_mut(l as usize - 1) {
            *flag = true;
        }
    }
    out.tokens.push(Token {
        kind,
        text,
        line,
        end_line,
    });
}
