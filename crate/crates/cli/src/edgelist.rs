//! Plain-text edge-list snapshots.
//!
//! ASCII, one edge per line as `u v` with `u < v`; isolated nodes stand
//! alone as `u` on a line; `#`-prefixed comment lines allowed anywhere.
//! Output is deterministic: comments first, then lines ascending by
//! `(u, v)` with isolated nodes interleaved at their id position.

use std::fmt;
use std::io::{self, BufRead, Write};

use alsf_core::{Graph, NodeId};

pub fn write_edge_list<W: Write>(w: &mut W, g: &Graph, comments: &[String]) -> io::Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    let mut live: Vec<NodeId> = g.live_nodes().to_vec();
    live.sort_unstable();
    for &u in &live {
        if g.degree(u) == 0 {
            writeln!(w, "{u}")?;
            continue;
        }
        let mut higher: Vec<NodeId> = g.neighbors(u).filter(|&v| v > u).collect();
        higher.sort_unstable();
        for v in higher {
            writeln!(w, "{u} {v}")?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListError {
    /// 1-based line number; 0 for file-level problems.
    pub line: usize,
    pub kind: EdgeListErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeListErrorKind {
    BadToken(String),
    TooManyTokens,
    /// Edges must satisfy u < v; rules out self-loops too.
    NotAscending { u: u32, v: u32 },
    DuplicateEdge { u: u32, v: u32 },
    /// A node written as isolated also appears in an edge.
    NotIsolated(u32),
    Io(String),
}

impl fmt::Display for EdgeListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            EdgeListErrorKind::BadToken(t) => write!(f, "bad node id {t:?}"),
            EdgeListErrorKind::TooManyTokens => write!(f, "expected `u` or `u v`"),
            EdgeListErrorKind::NotAscending { u, v } => {
                write!(f, "edge {u} {v} must satisfy u < v")
            }
            EdgeListErrorKind::DuplicateEdge { u, v } => write!(f, "duplicate edge {u} {v}"),
            EdgeListErrorKind::NotIsolated(u) => {
                write!(f, "node {u} listed as isolated but has edges")
            }
            EdgeListErrorKind::Io(e) => write!(f, "read failed: {e}"),
        }
    }
}

impl std::error::Error for EdgeListError {}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph, EdgeListError> {
    let mut g = Graph::new();
    let mut isolated: Vec<(usize, NodeId)> = Vec::new();
    let ensure = |g: &mut Graph, id: NodeId| {
        // Creating a node twice is fine while loading; ids collide when
        // both endpoints of several edges repeat.
        let _ = g.add_node_with_id(id);
    };
    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let err = |kind| EdgeListError { line: line_no, kind };
        let line = line.map_err(|e| err(EdgeListErrorKind::Io(e.to_string())))?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let parse = |t: &str| {
            t.parse::<u32>()
                .map(NodeId::new)
                .map_err(|_| err(EdgeListErrorKind::BadToken(t.to_string())))
        };
        let u = parse(tokens.next().expect("non-empty line has a token"))?;
        match tokens.next() {
            None => {
                ensure(&mut g, u);
                isolated.push((line_no, u));
            }
            Some(second) => {
                let v = parse(second)?;
                if tokens.next().is_some() {
                    return Err(err(EdgeListErrorKind::TooManyTokens));
                }
                if u >= v {
                    return Err(err(EdgeListErrorKind::NotAscending {
                        u: u.value(),
                        v: v.value(),
                    }));
                }
                ensure(&mut g, u);
                ensure(&mut g, v);
                let fresh = g.add_edge(u, v).expect("endpoints are live");
                if !fresh {
                    return Err(err(EdgeListErrorKind::DuplicateEdge {
                        u: u.value(),
                        v: v.value(),
                    }));
                }
            }
        }
    }
    for (line, u) in isolated {
        if g.degree(u) != 0 {
            return Err(EdgeListError {
                line,
                kind: EdgeListErrorKind::NotIsolated(u.value()),
            });
        }
    }
    Ok(g)
}

/// Strict scan for the `audit` subcommand: parses the file, verifies the
/// canonical ascending line order, and runs the graph's own
/// consistency audit. Returns a small stats line on success.
pub fn audit_edge_list<R: BufRead>(r: R) -> Result<String, EdgeListError> {
    let mut lines: Vec<String> = Vec::new();
    let mut keys: Vec<(u32, u32)> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line.map_err(|e| EdgeListError {
            line: idx + 1,
            kind: EdgeListErrorKind::Io(e.to_string()),
        })?;
        lines.push(line);
    }
    let joined = lines.join("\n");
    let g = read_edge_list(io::Cursor::new(joined.as_bytes()))?;
    g.audit().map_err(|e| EdgeListError {
        line: 0,
        kind: EdgeListErrorKind::Io(e.to_string()),
    })?;

    for (idx, line) in lines.iter().enumerate() {
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut it = body.split_whitespace();
        let u: u32 = it.next().unwrap().parse().unwrap();
        let v: u32 = it.next().map(|t| t.parse().unwrap()).unwrap_or(u32::MAX);
        let key = (u, v);
        if let Some(&last) = keys.last() {
            if key <= last {
                return Err(EdgeListError {
                    line: idx + 1,
                    kind: EdgeListErrorKind::Io(format!(
                        "lines out of canonical order: {:?} after {:?}",
                        key, last
                    )),
                });
            }
        }
        keys.push(key);
    }
    Ok(format!(
        "ok: {} nodes, {} edges, symmetric, simple, canonical order",
        g.live_count(),
        g.edge_count()
    ))
}
