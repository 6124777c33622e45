//! The key-tree text format shared by manifests, reports and certificates.
//!
//! ```text
//! document := entry*
//! entry    := key (':' value | block) ','?
//! block    := '{' entry* '}'
//! value    := STRING | BARE | array | block
//! array    := '[' (value (',' value)* ','?)? ']'
//! ```
//!
//! `#` starts a comment running to the end of the line.  Bare tokens are
//! runs of characters other than whitespace and `{}[]:,#"`.  Floating-point
//! literals are rejected.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Str(String, Pos),
    Bare(String, Pos),
    Array(Vec<Node>, Pos),
    Block(Vec<Entry>, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub pos: Pos,
    pub value: Node,
}

impl Node {
    pub fn pos(&self) -> Pos {
        match self {
            Node::Str(_, p) | Node::Bare(_, p) | Node::Array(_, p) | Node::Block(_, p) => *p,
        }
    }

    /// Text of a string or bare scalar.
    pub fn text(&self) -> Result<&str> {
        match self {
            Node::Str(s, _) | Node::Bare(s, _) => Ok(s),
            other => Err(other.pos().err("expected a scalar value")),
        }
    }

    /// Position of the first character of the scalar's content.
    pub fn content_pos(&self) -> Pos {
        match self {
            Node::Str(_, p) => Pos { line: p.line, col: p.col + 1 },
            other => other.pos(),
        }
    }

    pub fn items(&self) -> Result<&[Node]> {
        match self {
            Node::Array(v, _) => Ok(v),
            other => Err(other.pos().err("expected an array")),
        }
    }

    pub fn entries(&self) -> Result<&[Entry]> {
        match self {
            Node::Block(v, _) => Ok(v),
            other => Err(other.pos().err("expected a block")),
        }
    }

    pub fn get(&self, key: &str) -> Result<Option<&Node>> {
        Ok(self.entries()?.iter().find(|e| e.key == key).map(|e| &e.value))
    }

    pub fn require(&self, key: &str) -> Result<&Node> {
        self.get(key)?.ok_or_else(|| self.pos().err(format!("missing key `{}`", key)))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Str(String),
    Bare(String),
}

fn is_float_literal(s: &str) -> bool {
    let t = s.strip_prefix(['+', '-']).unwrap_or(s);
    if t.is_empty() || !t.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        return false;
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], Some(&t[i + 1..])),
        None => (t, None),
    };
    let mant_ok = !mant.is_empty()
        && mant.chars().all(|c| c.is_ascii_digit() || c == '.')
        && mant.chars().filter(|&c| c == '.').count() <= 1
        && mant.chars().any(|c| c.is_ascii_digit());
    let exp_ok = match exp {
        None => true,
        Some(e) => {
            let e = e.strip_prefix(['+', '-']).unwrap_or(e);
            !e.is_empty() && e.chars().all(|c| c.is_ascii_digit())
        }
    };
    mant_ok && exp_ok && (mant.contains('.') || exp.is_some())
}

fn lex(src: &str) -> Result<Vec<(Pos, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
            }
            ' ' | '\t' | '\r' => {
                col += 1;
                i += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '{' | '}' | '[' | ']' | ':' | ',' => {
                out.push((
                    pos,
                    match c {
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        ':' => Tok::Colon,
                        _ => Tok::Comma,
                    },
                ));
                col += 1;
                i += 1;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                col += 1;
                loop {
                    if i >= chars.len() || chars[i] == '\n' {
                        return Err(pos.err("unterminated string"));
                    }
                    let ch = chars[i];
                    if ch == '"' {
                        i += 1;
                        col += 1;
                        break;
                    }
                    if ch == '\\' {
                        let nx = chars.get(i + 1).copied();
                        match nx {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            _ => return Err(Pos { line, col }.err("invalid escape")),
                        }
                        i += 2;
                        col += 2;
                        continue;
                    }
                    s.push(ch);
                    i += 1;
                    col += 1;
                }
                out.push((pos, Tok::Str(s)));
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"{}[]:,#\"".contains(chars[i]) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                if is_float_literal(&s) {
                    return Err(pos.err(format!("floating-point literal `{}` is not allowed", s)));
                }
                out.push((pos, Tok::Bare(s)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Pos, Tok)>,
    i: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn entries(&mut self, closing: bool) -> Result<Vec<Entry>> {
        let mut out: Vec<Entry> = Vec::new();
        loop {
            match self.peek() {
                None => {
                    if closing {
                        return Err(self.pos().err("expected `}`"));
                    }
                    return Ok(out);
                }
                Some(Tok::RBrace) => {
                    if closing {
                        self.i += 1;
                        return Ok(out);
                    }
                    return Err(self.pos().err("unexpected `}`"));
                }
                Some(Tok::Str(_)) | Some(Tok::Bare(_)) => {
                    let pos = self.pos();
                    let key = match &self.toks[self.i].1 {
                        Tok::Str(s) | Tok::Bare(s) => s.clone(),
                        _ => unreachable!(),
                    };
                    self.i += 1;
                    if out.iter().any(|e| e.key == key) {
                        return Err(pos.err(format!("duplicate key `{}`", key)));
                    }
                    let value = match self.peek() {
                        Some(Tok::Colon) => {
                            self.i += 1;
                            self.value()?
                        }
                        Some(Tok::LBrace) => {
                            let p = self.pos();
                            self.i += 1;
                            Node::Block(self.entries(true)?, p)
                        }
                        _ => return Err(self.pos().err(format!("expected `:` or `{{` after key `{}`", key))),
                    };
                    out.push(Entry { key, pos, value });
                    if let Some(Tok::Comma) = self.peek() {
                        self.i += 1;
                    }
                }
                Some(_) => return Err(self.pos().err("expected a key")),
            }
        }
    }

    fn value(&mut self) -> Result<Node> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                self.i += 1;
                Ok(Node::Str(s, pos))
            }
            Some(Tok::Bare(s)) => {
                self.i += 1;
                Ok(Node::Bare(s, pos))
            }
            Some(Tok::LBrace) => {
                self.i += 1;
                Ok(Node::Block(self.entries(true)?, pos))
            }
            Some(Tok::LBracket) => {
                self.i += 1;
                let mut items = Vec::new();
                loop {
                    if let Some(Tok::RBracket) = self.peek() {
                        self.i += 1;
                        break;
                    }
                    items.push(self.value()?);
                    match self.peek() {
                        Some(Tok::Comma) => self.i += 1,
                        Some(Tok::RBracket) => {}
                        _ => return Err(self.pos().err("expected `,` or `]`")),
                    }
                }
                Ok(Node::Array(items, pos))
            }
            _ => Err(pos.err("expected a value")),
        }
    }
}

/// Parses a document into its top-level block.
pub fn parse(src: &str) -> Result<Node> {
    let toks = lex(src)?;
    let lines = src.lines().count().max(1);
    let last_col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    let mut p = Parser { toks, i: 0, end: Pos { line: lines, col: last_col } };
    let entries = p.entries(false)?;
    Ok(Node::Block(entries, Pos { line: 1, col: 1 }))
}

fn is_bare_safe(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || "_-+/.^*".contains(c))
        && !is_float_literal(s)
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn key_text(k: &str) -> String {
    if is_bare_safe(k) && k.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
        k.to_string()
    } else {
        quote(k)
    }
}

/// Indented writer for the key-tree format.
#[derive(Default)]
pub struct Emitter {
    out: String,
    depth: usize,
}

impl Emitter {
    pub fn new() -> Emitter {
        Emitter::default()
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    /// `key: value` with a bare value.
    pub fn entry(&mut self, key: &str, value: &str) {
        self.indent();
        let _ = writeln!(self.out, "{}: {}", key_text(key), value);
    }

    /// `key: "value"`.
    pub fn entry_str(&mut self, key: &str, value: &str) {
        self.indent();
        let _ = writeln!(self.out, "{}: {}", key_text(key), quote(value));
    }

    /// `key: [a, b]` with items emitted verbatim.
    pub fn entry_array(&mut self, key: &str, items: &[String]) {
        self.indent();
        let _ = writeln!(self.out, "{}: [{}]", key_text(key), items.join(", "));
    }

    pub fn open(&mut self, key: &str) {
        self.indent();
        let _ = writeln!(self.out, "{} {{", key_text(key));
        self.depth += 1;
    }

    pub fn open_str(&mut self, key: &str) {
        self.indent();
        let _ = writeln!(self.out, "{} {{", quote(key));
        self.depth += 1;
    }

    pub fn close(&mut self) {
        self.depth -= 1;
        self.indent();
        self.out.push_str("}\n");
    }

    pub fn comment(&mut self, text: &str) {
        self.indent();
        let _ = writeln!(self.out, "# {}", text);
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Renders a bare token, quoting when needed.
pub fn bare_or_quoted(s: &str) -> String {
    if is_bare_safe(s) {
        s.to_string()
    } else {
        quote(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested() {
        let src = "format: 1\nring {\n  basis: [e1, e2]\n  generators { x: \"e1\" }\n}\n# c\n";
        let doc = parse(src).unwrap();
        assert_eq!(doc.require("format").unwrap().text().unwrap(), "1");
        let ring = doc.require("ring").unwrap();
        assert_eq!(ring.require("basis").unwrap().items().unwrap().len(), 2);
        let gens = ring.require("generators").unwrap();
        assert_eq!(gens.require("x").unwrap().text().unwrap(), "e1");
    }

    #[test]
    fn float_located() {
        let err = parse("a: 1\nb: 0.5\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, col: 4, msg: "floating-point literal `0.5` is not allowed".into() });
        assert!(parse("a: 1e3").is_err());
        assert!(parse("a: 1/3").is_ok());
    }

    #[test]
    fn duplicate_and_unterminated() {
        assert!(matches!(parse("a: 1\na: 2"), Err(Error::Parse { line: 2, col: 1, .. })));
        assert!(matches!(parse("a {\n b: 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("a: \"x\n"), Err(Error::Parse { line: 1, col: 4, .. })));
    }

    #[test]
    fn emit_then_parse() {
        let mut em = Emitter::new();
        em.entry("format", "1");
        em.open("x");
        em.entry_str("a,b", "1 + \"q\"");
        em.entry_array("list", &["p".into(), quote("r s")]);
        em.close();
        let text = em.finish();
        let doc = parse(&text).unwrap();
        let x = doc.require("x").unwrap();
        assert_eq!(x.require("a,b").unwrap().text().unwrap(), "1 + \"q\"");
        assert_eq!(x.require("list").unwrap().items().unwrap()[1].text().unwrap(), "r s");
    }
}
