//! Serialization of temporal graphs to a strict DOT subset and back.
//!
//! The encoder produces exactly one layout:
//!
//! ```text
//! digraph g {
//!   "isolated event";
//!   "source event" -> "target event" [label="before"];
//! }
//! ```
//!
//! Bare node statements come first (only for events without edges), then
//! edges in the graph's document order. The decoder is more lenient about
//! whitespace, optional semicolons, bare identifiers and the `is included`
//! spelling, but still accepts only labeled directed edges.

use std::collections::BTreeMap;

use crate::error::DotError;
use crate::graph::{normalize_phrase, Event, RelationLabel, TemporalEdge, TemporalGraph};

const HEADER: &str = "digraph g {\n";
const INDENT: &str = "  ";

fn push_quoted(out: &mut String, phrase: &str) {
    out.push('"');
    for ch in phrase.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
}

/// Encodes a graph in the canonical DOT layout. Output is byte-for-byte
/// deterministic for a given graph.
pub fn encode(g: &TemporalGraph) -> String {
    let mut out = String::from(HEADER);
    for e in g.isolated_events() {
        out.push_str(INDENT);
        push_quoted(&mut out, &e.phrase);
        out.push_str(";\n");
    }
    for edge in g.edges() {
        out.push_str(INDENT);
        push_quoted(&mut out, g.phrase(edge.source));
        out.push_str(" -> ");
        push_quoted(&mut out, g.phrase(edge.target));
        out.push_str(" [label=\"");
        out.push_str(edge.label.as_str());
        out.push_str("\"];\n");
    }
    out.push_str("}\n");
    out
}

/// True iff [`decode`] accepts the text.
pub fn is_valid_dot(text: &str) -> bool {
    decode(text).is_ok()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Quoted(String),
    Arrow,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Equals,
    Semi,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Id(s) => format!("identifier `{s}`"),
            Tok::Quoted(_) => "quoted string".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> DotError {
    DotError::Syntax {
        offset,
        message: message.into(),
    }
}

fn is_id_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    /// Returns the next token and the byte offset where it starts.
    fn next(&mut self) -> Result<(usize, Tok), DotError> {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
        let start = self.pos;
        let mut chars = trimmed.chars();
        let Some(c) = chars.next() else {
            return Ok((start, Tok::Eof));
        };
        let single = |tok| Ok((start, tok));
        match c {
            '{' => {
                self.pos += 1;
                single(Tok::LBrace)
            }
            '}' => {
                self.pos += 1;
                single(Tok::RBrace)
            }
            '[' => {
                self.pos += 1;
                single(Tok::LBracket)
            }
            ']' => {
                self.pos += 1;
                single(Tok::RBracket)
            }
            '=' => {
                self.pos += 1;
                single(Tok::Equals)
            }
            ';' => {
                self.pos += 1;
                single(Tok::Semi)
            }
            ',' => {
                self.pos += 1;
                single(Tok::Comma)
            }
            '-' if trimmed.starts_with("->") => {
                self.pos += 2;
                single(Tok::Arrow)
            }
            '"' => self.quoted(start),
            c if is_id_char(c) => {
                let len = trimmed
                    .find(|ch: char| !is_id_char(ch))
                    .unwrap_or(trimmed.len());
                self.pos += len;
                Ok((start, Tok::Id(trimmed[..len].to_string())))
            }
            other => Err(syntax(start, format!("unexpected character `{other}`"))),
        }
    }

    fn quoted(&mut self, start: usize) -> Result<(usize, Tok), DotError> {
        let mut out = String::new();
        let mut chars = self.src[start + 1..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos = start + 1 + i + 1;
                    return Ok((start, Tok::Quoted(out)));
                }
                '\\' => match chars.next() {
                    Some((_, e @ ('"' | '\\'))) => out.push(e),
                    Some((_, e)) => {
                        out.push('\\');
                        out.push(e);
                    }
                    None => break,
                },
                c => out.push(c),
            }
        }
        Err(syntax(self.src.len(), "unterminated string"))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<(usize, Tok)>,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(usize, Tok), DotError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next(),
        }
    }

    fn peek(&mut self) -> Result<&Tok, DotError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(&self.peeked.as_ref().expect("peeked").1)
    }

    fn expect(&mut self, want: Tok) -> Result<usize, DotError> {
        let (at, tok) = self.bump()?;
        if tok == want {
            Ok(at)
        } else {
            Err(syntax(
                at,
                format!("expected {}, found {}", want.describe(), tok.describe()),
            ))
        }
    }

    fn node(&mut self) -> Result<(usize, String), DotError> {
        let (at, tok) = self.bump()?;
        let raw = match tok {
            Tok::Id(s) | Tok::Quoted(s) => s,
            other => {
                return Err(syntax(
                    at,
                    format!("expected node name, found {}", other.describe()),
                ))
            }
        };
        let phrase = normalize_phrase(&raw);
        if phrase.is_empty() {
            return Err(syntax(at, "empty node name"));
        }
        Ok((at, phrase))
    }

    fn label_attr(&mut self) -> Result<RelationLabel, DotError> {
        let open = self.expect(Tok::LBracket)?;
        let mut label = None;
        loop {
            let (at, tok) = self.bump()?;
            match tok {
                Tok::RBracket => break,
                Tok::Comma | Tok::Semi => continue,
                Tok::Id(key) if key == "label" => {
                    self.expect(Tok::Equals)?;
                    let (vat, value) = self.bump()?;
                    let text = match value {
                        Tok::Id(s) | Tok::Quoted(s) => s,
                        other => {
                            return Err(syntax(
                                vat,
                                format!("expected label value, found {}", other.describe()),
                            ))
                        }
                    };
                    let parsed = text
                        .trim()
                        .parse::<RelationLabel>()
                        .ok()
                        .filter(|l| *l != RelationLabel::Vague)
                        .ok_or_else(|| DotError::UnknownLabel {
                            offset: vat,
                            label: text.clone(),
                        })?;
                    if label.replace(parsed).is_some() {
                        return Err(syntax(at, "duplicate label attribute"));
                    }
                }
                Tok::Id(key) => {
                    return Err(syntax(at, format!("unsupported attribute `{key}`")));
                }
                other => {
                    return Err(syntax(
                        at,
                        format!("expected attribute, found {}", other.describe()),
                    ))
                }
            }
        }
        label.ok_or_else(|| syntax(open, "edge without a label attribute"))
    }
}

#[derive(Default)]
struct Builder {
    ids: BTreeMap<String, usize>,
    order: Vec<String>,
    edges: Vec<TemporalEdge>,
}

impl Builder {
    fn intern(&mut self, phrase: String) -> usize {
        if let Some(&id) = self.ids.get(&phrase) {
            return id;
        }
        let id = self.order.len();
        self.ids.insert(phrase.clone(), id);
        self.order.push(phrase);
        id
    }
}

/// Parses a DOT document into a graph.
///
/// Nodes receive synthetic token indices in order of first appearance.
/// Duplicate edge statements collapse to one edge; the remaining edges keep
/// their statement order, so re-encoding reproduces the input layout.
pub fn decode(text: &str) -> Result<TemporalGraph, DotError> {
    let mut p = Parser {
        lexer: Lexer::new(text),
        peeked: None,
    };
    let (at, tok) = p.bump()?;
    if !matches!(&tok, Tok::Id(k) if k.eq_ignore_ascii_case("digraph")) {
        return Err(syntax(
            at,
            format!("expected `digraph`, found {}", tok.describe()),
        ));
    }
    if matches!(p.peek()?, Tok::Id(_) | Tok::Quoted(_)) {
        p.bump()?;
    }
    p.expect(Tok::LBrace)?;

    let mut b = Builder::default();
    loop {
        match p.peek()? {
            Tok::RBrace => {
                p.bump()?;
                break;
            }
            Tok::Semi => {
                p.bump()?;
                continue;
            }
            _ => {}
        }
        let (at, src) = p.node()?;
        if *p.peek()? == Tok::Arrow {
            p.bump()?;
            let (_, dst) = p.node()?;
            let label = p.label_attr()?;
            if src == dst {
                return Err(DotError::SelfLoop {
                    offset: at,
                    phrase: src,
                });
            }
            let s = b.intern(src);
            let t = b.intern(dst);
            b.edges
                .push(TemporalEdge::rule(s, t, label).expect("distinct endpoints"));
        } else {
            b.intern(src);
        }
        if *p.peek()? == Tok::Semi {
            p.bump()?;
        }
    }
    let (at, tok) = p.bump()?;
    if tok != Tok::Eof {
        return Err(syntax(
            at,
            format!("trailing {} after graph", tok.describe()),
        ));
    }

    let events = b
        .order
        .iter()
        .enumerate()
        .map(|(i, phrase)| Event::from_phrase(phrase, i))
        .collect();
    Ok(TemporalGraph::with_edge_order("", events, b.edges).expect("decoded graph is well formed"))
}
