//! Line-oriented graph files.
//!
//! ```text
//! c optional comment
//! p <n> <m>
//! e <i> <j>
//! ```
//!
//! Indices are 0-based. Blank lines and `c` lines are ignored anywhere.

use super::{GraphError, InputGraph};
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

pub fn format_graph(g: &InputGraph) -> String {
    let mut s = String::with_capacity(16 + 12 * g.edge_count());
    writeln!(s, "p {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (a, b) in g.edges() {
        writeln!(s, "e {a} {b}").unwrap();
    }
    s
}

pub fn write_graph(g: &InputGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    std::fs::write(path, format_graph(g))?;
    Ok(())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<InputGraph, GraphError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, message: message.into() }
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_graph(text: &str) -> Result<InputGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(line, "second header line"));
                }
                let n = parse_num(toks.next(), line, "vertex count")?;
                let m = parse_num(toks.next(), line, "edge count")?;
                if toks.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after header"));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| parse_err(line, "edge line before header"))?;
                let a = parse_num(toks.next(), line, "endpoint")?;
                let b = parse_num(toks.next(), line, "endpoint")?;
                if toks.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after edge"));
                }
                if a >= n || b >= n {
                    return Err(parse_err(
                        line,
                        format!("vertex index {} out of range for n = {n}", a.max(b)),
                    ));
                }
                if a == b {
                    return Err(parse_err(line, format!("self-loop at vertex {a}")));
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(parse_err(line, format!("duplicate edge ({a}, {b})")));
                }
                edges.push((a, b));
            }
            Some(t) => return Err(parse_err(line, format!("unknown line type '{t}'"))),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(text.lines().count().max(1), "missing header 'p <n> <m>'"))?;
    if edges.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("header declares {m} edges but {} were read", edges.len()),
        ));
    }
    InputGraph::new(n, edges)
}
