//! Plain-text edge lists.
//!
//! ```text
//! p <n> <m>
//! <u> <v>      (m lines, 0 <= u < v < n)
//! ```
//!
//! Serialization writes edges in lexicographic order and separates lines with
//! a single LF, with no trailing newline. The parser accepts one trailing LF.

use thiserror::Error;

use crate::graph::Graph;

/// Largest vertex count the parser will allocate for.
pub const MAX_VERTICES: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header line \"p <n> <m>\"")]
    MissingHeader,
    #[error("malformed header, expected \"p <n> <m>\"")]
    MalformedHeader,
    #[error("vertex count {0} exceeds the parser limit of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("malformed edge line, expected \"<u> <v>\"")]
    MalformedEdge,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge endpoints must be ordered u < v, got {0} {1}")]
    Unordered(usize, usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    let header = match lines.next() {
        Some(h) if !h.is_empty() => h,
        _ => return Err(err(1, ParseErrorKind::MissingHeader)),
    };
    let fields: Vec<&str> = header.split(' ').collect();
    let (n, m) = match fields.as_slice() {
        ["p", n, m] => match (parse_num(n), parse_num(m)) {
            (Some(n), Some(m)) => (n, m),
            _ => return Err(err(1, ParseErrorKind::MalformedHeader)),
        },
        _ => return Err(err(1, ParseErrorKind::MalformedHeader)),
    };
    if n > MAX_VERTICES {
        return Err(err(1, ParseErrorKind::TooManyVertices(n)));
    }
    let mut g = Graph::new(n);
    let mut found = 0;
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let pair: Vec<&str> = line.split(' ').collect();
        let (u, v) = match pair.as_slice() {
            [u, v] => match (parse_num(u), parse_num(v)) {
                (Some(u), Some(v)) => (u, v),
                _ => return Err(err(lineno, ParseErrorKind::MalformedEdge)),
            },
            _ => return Err(err(lineno, ParseErrorKind::MalformedEdge)),
        };
        if u == v {
            return Err(err(lineno, ParseErrorKind::SelfLoop(u)));
        }
        for x in [u, v] {
            if x >= n {
                return Err(err(lineno, ParseErrorKind::VertexOutOfRange { vertex: x, n }));
            }
        }
        if u > v {
            return Err(err(lineno, ParseErrorKind::Unordered(u, v)));
        }
        if !g.insert(u, v) {
            return Err(err(lineno, ParseErrorKind::DuplicateEdge(u, v)));
        }
        found += 1;
    }
    if found != m {
        let line = if found > m { m + 2 } else { found + 2 };
        return Err(err(line, ParseErrorKind::EdgeCount { declared: m, found }));
    }
    Ok(g)
}

/// Unsigned decimal without sign or leading `+`; leading zeros are allowed.
fn parse_num(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push('\n');
        out.push_str(&u.to_string());
        out.push(' ');
        out.push_str(&v.to_string());
    }
    out
}

/// Edge list of an explicit pair list on `n` vertices, in the given order.
pub fn serialize_pairs(n: usize, pairs: &[(usize, usize)]) -> String {
    let mut out = format!("p {} {}", n, pairs.len());
    for &(u, v) in pairs {
        out.push_str(&format!("\n{u} {v}"));
    }
    out
}
