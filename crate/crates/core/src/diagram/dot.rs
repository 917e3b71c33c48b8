//! Parser for the DOT subset produced by [`super::emit_dot`]: one digraph
//! with attribute, node and single-hop edge statements.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("DOT parse error at byte {offset}: {message}")]
pub struct DotError {
    pub offset: usize,
    pub message: String,
}

pub type Attrs = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotNode {
    pub name: String,
    pub attrs: Attrs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotEdge {
    pub from: String,
    pub to: String,
    pub attrs: Attrs,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotGraph {
    pub name: Option<String>,
    pub graph_attrs: Attrs,
    pub node_defaults: Attrs,
    pub edge_defaults: Attrs,
    /// In order of first mention.
    pub nodes: Vec<DotNode>,
    pub edges: Vec<DotEdge>,
}

impl DotGraph {
    pub fn node(&self, name: &str) -> Option<&DotNode> {
        self.nodes.iter().find(|n| n.name == name)
    }

    /// Node attribute, falling back to the `node [...]` defaults.
    pub fn node_attr<'a>(&'a self, node: &'a DotNode, key: &str) -> Option<&'a str> {
        node.attrs
            .get(key)
            .or_else(|| self.node_defaults.get(key))
            .map(String::as_str)
    }

    pub fn edge_attr<'a>(&'a self, edge: &'a DotEdge, key: &str) -> Option<&'a str> {
        edge.attrs
            .get(key)
            .or_else(|| self.edge_defaults.get(key))
            .map(String::as_str)
    }

    fn touch(&mut self, name: &str) -> usize {
        match self.nodes.iter().position(|n| n.name == name) {
            Some(i) => i,
            None => {
                self.nodes.push(DotNode {
                    name: name.to_string(),
                    attrs: Attrs::new(),
                });
                self.nodes.len() - 1
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Arrow,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, DotError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset, message: &str| DotError {
        offset,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'{' | b'}' | b'[' | b']' | b'=' | b';' | b',' => {
                out.push((
                    start,
                    match c {
                        b'{' => Tok::LBrace,
                        b'}' => Tok::RBrace,
                        b'[' => Tok::LBracket,
                        b']' => Tok::RBracket,
                        b'=' => Tok::Eq,
                        b';' => Tok::Semi,
                        _ => Tok::Comma,
                    },
                ));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Tok::Arrow));
                i += 2;
            }
            b'"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    let Some(ch) = src[i..].chars().next() else {
                        return Err(err(start, "unterminated string"));
                    };
                    i += ch.len_utf8();
                    match ch {
                        '"' => break,
                        '\\' => {
                            let Some(next) = src[i..].chars().next() else {
                                return Err(err(start, "unterminated string"));
                            };
                            i += next.len_utf8();
                            if next != '"' && next != '\\' {
                                s.push('\\');
                            }
                            s.push(next);
                        }
                        _ => s.push(ch),
                    }
                }
                out.push((start, Tok::Id(s)));
            }
            c if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'-' => {
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'.')
                {
                    i += 1;
                }
                if i == start + 1 && c == b'-' {
                    return Err(err(start, "unexpected '-'"));
                }
                out.push((start, Tok::Id(src[start..i].to_string())));
            }
            _ => return Err(err(start, "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, DotError> {
        Err(DotError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), DotError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn id(&mut self) -> Result<String, DotError> {
        match self.peek() {
            Some(Tok::Id(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail("expected identifier"),
        }
    }

    fn attr_list(&mut self, into: &mut Attrs) -> Result<(), DotError> {
        while self.eat(&Tok::LBracket) {
            while !self.eat(&Tok::RBracket) {
                let key = self.id()?;
                self.expect(Tok::Eq, "'='")?;
                let value = self.id()?;
                into.insert(key, value);
                let _ = self.eat(&Tok::Comma) || self.eat(&Tok::Semi);
            }
        }
        Ok(())
    }
}

pub fn parse_dot(src: &str) -> Result<DotGraph, DotError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        end: src.len(),
    };
    let mut g = DotGraph::default();
    if p.peek() == Some(&Tok::Id("strict".into())) {
        p.at += 1;
    }
    if p.id()? != "digraph" {
        p.at -= 1;
        return p.fail("expected 'digraph'");
    }
    if let Some(Tok::Id(_)) = p.peek() {
        g.name = Some(p.id()?);
    }
    p.expect(Tok::LBrace, "'{'")?;
    while !p.eat(&Tok::RBrace) {
        if p.peek().is_none() {
            return p.fail("expected '}'");
        }
        if p.eat(&Tok::Semi) {
            continue;
        }
        let first = p.id()?;
        match (first.as_str(), p.peek()) {
            ("graph", Some(Tok::LBracket)) => {
                let mut a = std::mem::take(&mut g.graph_attrs);
                p.attr_list(&mut a)?;
                g.graph_attrs = a;
            }
            ("node", Some(Tok::LBracket)) => {
                let mut a = std::mem::take(&mut g.node_defaults);
                p.attr_list(&mut a)?;
                g.node_defaults = a;
            }
            ("edge", Some(Tok::LBracket)) => {
                let mut a = std::mem::take(&mut g.edge_defaults);
                p.attr_list(&mut a)?;
                g.edge_defaults = a;
            }
            (_, Some(Tok::Eq)) => {
                p.at += 1;
                let value = p.id()?;
                g.graph_attrs.insert(first, value);
            }
            (_, Some(Tok::Arrow)) => {
                p.at += 1;
                let to = p.id()?;
                if p.peek() == Some(&Tok::Arrow) {
                    return p.fail("edge chains are not supported");
                }
                let mut attrs = Attrs::new();
                p.attr_list(&mut attrs)?;
                g.touch(&first);
                g.touch(&to);
                g.edges.push(DotEdge {
                    from: first,
                    to,
                    attrs,
                });
            }
            _ => {
                let i = g.touch(&first);
                let mut attrs = std::mem::take(&mut g.nodes[i].attrs);
                p.attr_list(&mut attrs)?;
                g.nodes[i].attrs = attrs;
            }
        }
    }
    if p.peek().is_some() {
        return p.fail("trailing input after graph");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_statements() {
        let g = parse_dot(
            r##"digraph "pda" {
                rankdir=LR;
                node [shape=circle];
                "S" [id="state-S" color="#008000", penwidth=2];
                S -> A [label="a, ε → \"b\""];
                // comment
                B;
            }"##,
        )
        .unwrap();
        assert_eq!(g.name.as_deref(), Some("pda"));
        assert_eq!(g.graph_attrs["rankdir"], "LR");
        let names: Vec<_> = g.nodes.iter().map(|n| n.name.as_str()).collect();
        assert_eq!(names, ["S", "A", "B"]);
        assert_eq!(g.node_attr(&g.nodes[1], "shape"), Some("circle"));
        assert_eq!(g.nodes[0].attrs["penwidth"], "2");
        assert_eq!(g.edges[0].attrs["label"], "a, ε → \"b\"");
    }

    #[test]
    fn reports_offsets() {
        let err = parse_dot("digraph { S -> }").unwrap_err();
        assert_eq!(err.offset, 15);
        assert!(parse_dot("graph { }").is_err());
        assert!(parse_dot("digraph { \"S }").is_err());
        assert!(parse_dot("digraph { A -> B -> C }").is_err());
        assert!(parse_dot("digraph { } x").is_err());
    }
}
