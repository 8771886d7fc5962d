//! Text formats: DIMACS edge files, colouring files and sequence files.
//!
//! All three are 1-indexed on disk and 0-indexed in memory.

use std::fmt::Write as _;

use log::warn;
use thiserror::Error;

use crate::colouring::{Colouring, ColouringError};
use crate::graph::{Graph, GraphError};
use crate::recolor::RecolourStep;

/// A parse failure, tagged with the 1-based line it occurred on (0 when the
/// problem is the absence of something, such as a missing header).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Something suspicious that did not stop parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

/// Parses a DIMACS edge file, logging warnings (duplicate edges, edge count
/// differing from the header) through `log`.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let (g, warnings) = parse_dimacs_with_warnings(text)?;
    for w in warnings {
        warn!("line {}: {}", w.line, w.message);
    }
    Ok(g)
}

pub fn parse_dimacs_with_warnings(text: &str) -> Result<(Graph, Vec<ParseWarning>), ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut fields = raw.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(ParseError::new(line, "second problem line"));
                }
                let format = fields.next();
                if !matches!(format, Some("edge") | Some("col")) {
                    return Err(ParseError::new(line, "expected `p edge <n> <m>`"));
                }
                let n = parse_count(fields.next(), line, "vertex count")?;
                let m = parse_count(fields.next(), line, "edge count")?;
                if fields.next().is_some() {
                    return Err(ParseError::new(line, "trailing fields after `p edge <n> <m>`"));
                }
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(ParseError::new(line, "edge line before the problem line"));
                };
                let u = parse_vertex(fields.next(), n, line)?;
                let v = parse_vertex(fields.next(), n, line)?;
                if fields.next().is_some() {
                    return Err(ParseError::new(line, "trailing fields after `e <u> <v>`"));
                }
                if u == v {
                    return Err(ParseError::new(line, format!("self-loop on vertex {}", u + 1)));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    warnings.push(ParseWarning {
                        line,
                        message: format!("duplicate edge {} {} ignored", u + 1, v + 1),
                    });
                    continue;
                }
                edges.push((u, v));
            }
            other => return Err(ParseError::new(line, format!("unknown line type `{other}`"))),
        }
    }
    let Some((n, declared)) = header else {
        return Err(ParseError::new(0, "missing `p edge <n> <m>` problem line"));
    };
    if declared != edges.len() {
        warnings.push(ParseWarning {
            line: 0,
            message: format!("header declares {declared} edges, found {} distinct", edges.len()),
        });
    }
    let g = Graph::from_edges(n, edges).map_err(|e: GraphError| ParseError::new(0, e.to_string()))?;
    Ok((g, warnings))
}

fn parse_count(field: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| ParseError::new(line, format!("missing or malformed {what}")))
}

fn parse_vertex(field: Option<&str>, n: usize, line: usize) -> Result<usize, ParseError> {
    let v: usize = parse_count(field, line, "vertex")?;
    if v == 0 || v > n {
        return Err(ParseError::new(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Whitespace-separated colours, the i-th belonging to vertex i.
pub fn parse_colouring(text: &str, k: usize) -> Result<Colouring, ParseError> {
    let mut colours = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        for field in raw.split_whitespace() {
            let c: usize = field
                .parse()
                .map_err(|_| ParseError::new(idx + 1, format!("`{field}` is not a colour")))?;
            if c == 0 || c > k {
                return Err(ParseError::new(idx + 1, format!("colour {c} outside 1..={k}")));
            }
            colours.push(c);
        }
    }
    Colouring::new(colours, k).map_err(|e: ColouringError| ParseError::new(0, e.to_string()))
}

pub fn write_colouring(f: &Colouring) -> String {
    let mut out = f.as_slice().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    out.push('\n');
    out
}

/// `s <count>` followed by `count` lines `<vertex> <colour>`. Blank lines and
/// `c` comment lines are skipped anywhere.
pub fn parse_sequence(text: &str) -> Result<Vec<RecolourStep>, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| {
        let l = l.trim_start();
        !l.is_empty() && !(l == "c" || l.starts_with("c "))
    });
    let (idx, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "missing `s <count>` header"))?;
    let count = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["s", count] => count
            .parse::<usize>()
            .map_err(|_| ParseError::new(idx + 1, "malformed step count"))?,
        _ => return Err(ParseError::new(idx + 1, "expected `s <count>`")),
    };
    let mut steps = Vec::with_capacity(count);
    for (idx, raw) in lines {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let [v, c] = fields.as_slice() else {
            return Err(ParseError::new(line, "expected `<vertex> <colour>`"));
        };
        let v: usize = v.parse().map_err(|_| ParseError::new(line, "malformed vertex"))?;
        let c: usize = c.parse().map_err(|_| ParseError::new(line, "malformed colour"))?;
        if v == 0 {
            return Err(ParseError::new(line, "vertices are 1-indexed"));
        }
        steps.push(RecolourStep::new(v - 1, c));
    }
    if steps.len() != count {
        return Err(ParseError::new(
            0,
            format!("header announces {count} steps, found {}", steps.len()),
        ));
    }
    Ok(steps)
}

pub fn write_sequence(steps: &[RecolourStep]) -> String {
    let mut out = format!("s {}\n", steps.len());
    for step in steps {
        let _ = writeln!(out, "{} {}", step.vertex + 1, step.colour);
    }
    out
}
