//! Graph file formats.
//!
//! Text, one item per line, `#` starts a comment:
//!
//! ```text
//! vertex v        # optional, endpoints are declared on first use
//! edge v w 0      # head tail decoration (>= -1)
//! loop v 2        # vertex decoration (>= 0)
//! ```
//!
//! JSON: `{"vertices":["v","w"],"edges":[["v","w",0]],"loops":[["v",2]]}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{DecoratedGraph, Edge, GraphCombination, GraphError, Label, Loop};
use crate::qmodring::format::{parse_rational, rational_to_string};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_text(src: &str) -> Result<DecoratedGraph, GraphError> {
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["vertex", v] => {
                vertices.insert(Label::new(v));
            }
            ["edge", h, t, dec] => {
                let dec: i64 = dec
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("invalid decoration `{dec}`")))?;
                if dec < -1 || dec > i32::MAX as i64 {
                    return Err(parse_err(
                        line_no,
                        format!("edge decoration {dec} out of range (must be >= -1)"),
                    ));
                }
                if h == t {
                    return Err(parse_err(
                        line_no,
                        format!("edge head and tail coincide (`{h}`)"),
                    ));
                }
                vertices.insert(Label::new(h));
                vertices.insert(Label::new(t));
                edges.push(Edge::new(*h, *t, dec as i32));
            }
            ["loop", v, dec] => {
                let dec: i64 = dec
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("invalid decoration `{dec}`")))?;
                if dec < 0 || dec > u32::MAX as i64 {
                    return Err(parse_err(
                        line_no,
                        format!("loop decoration {dec} out of range (must be >= 0)"),
                    ));
                }
                vertices.insert(Label::new(v));
                loops.push(Loop::new(*v, dec as u32));
            }
            [kw, ..] if matches!(*kw, "vertex" | "edge" | "loop") => {
                return Err(parse_err(line_no, format!("wrong number of fields for `{kw}`")));
            }
            [kw, ..] => return Err(parse_err(line_no, format!("unknown directive `{kw}`"))),
            [] => unreachable!(),
        }
    }
    Ok(DecoratedGraph::from_parts_unchecked(
        vertices.into_iter().collect(),
        edges,
        loops,
    ))
}

pub fn to_text(g: &DecoratedGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in g.edges() {
        out.push_str(&format!("edge {} {} {}\n", e.head, e.tail, e.dec));
    }
    for l in g.loops() {
        out.push_str(&format!("loop {} {}\n", l.vertex, l.dec));
    }
    out
}

/// One-line rendering, e.g. `[v w | v>w:0 v>w:-1 | w@2]`.
pub fn to_inline(g: &DecoratedGraph) -> String {
    let vs: Vec<String> = g.vertices().iter().map(|v| v.to_string()).collect();
    let es: Vec<String> = g
        .edges()
        .iter()
        .map(|e| format!("{}>{}:{}", e.head, e.tail, e.dec))
        .collect();
    let ls: Vec<String> = g
        .loops()
        .iter()
        .map(|l| format!("{}@{}", l.vertex, l.dec))
        .collect();
    format!("[{} | {} | {}]", vs.join(" "), es.join(" "), ls.join(" "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonGraph {
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String, i64)>,
    #[serde(default)]
    pub loops: Vec<(String, i64)>,
}

impl From<&DecoratedGraph> for JsonGraph {
    fn from(g: &DecoratedGraph) -> Self {
        JsonGraph {
            vertices: g.vertices().iter().map(|v| v.to_string()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| (e.head.to_string(), e.tail.to_string(), e.dec as i64))
                .collect(),
            loops: g
                .loops()
                .iter()
                .map(|l| (l.vertex.to_string(), l.dec as i64))
                .collect(),
        }
    }
}

impl TryFrom<&JsonGraph> for DecoratedGraph {
    type Error = GraphError;
    fn try_from(j: &JsonGraph) -> Result<Self, GraphError> {
        let mut vertices: BTreeSet<Label> = j.vertices.iter().map(|v| Label::new(v)).collect();
        let mut edges = Vec::with_capacity(j.edges.len());
        for (h, t, dec) in &j.edges {
            if *dec < -1 || *dec > i32::MAX as i64 {
                return Err(GraphError::EdgeDecoration(*dec));
            }
            if h == t {
                return Err(GraphError::SelfEdge(h.clone()));
            }
            vertices.insert(Label::new(h));
            vertices.insert(Label::new(t));
            edges.push(Edge::new(h.as_str(), t.as_str(), *dec as i32));
        }
        let mut loops = Vec::with_capacity(j.loops.len());
        for (v, dec) in &j.loops {
            if *dec < 0 || *dec > u32::MAX as i64 {
                return Err(GraphError::LoopDecoration(*dec));
            }
            vertices.insert(Label::new(v));
            loops.push(Loop::new(v.as_str(), *dec as u32));
        }
        Ok(DecoratedGraph::from_parts_unchecked(
            vertices.into_iter().collect(),
            edges,
            loops,
        ))
    }
}

pub fn to_json(g: &DecoratedGraph) -> String {
    serde_json::to_string(&JsonGraph::from(g)).expect("graph JSON serialization")
}

pub fn parse_json(src: &str) -> Result<DecoratedGraph, GraphError> {
    let j: JsonGraph = serde_json::from_str(src).map_err(|e| parse_err(e.line(), e.to_string()))?;
    DecoratedGraph::try_from(&j)
}

/// Dispatches on the first non-blank character: `{` means JSON.
pub fn parse_auto(src: &str) -> Result<DecoratedGraph, GraphError> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonCombinationTerm {
    pub coeff: String,
    pub graph: JsonGraph,
}

pub fn combination_to_json(c: &GraphCombination) -> String {
    let terms: Vec<JsonCombinationTerm> = c
        .iter()
        .map(|(g, q)| JsonCombinationTerm {
            coeff: rational_to_string(q),
            graph: JsonGraph::from(g),
        })
        .collect();
    serde_json::to_string(&terms).expect("combination JSON serialization")
}

pub fn combination_from_json(src: &str) -> Result<GraphCombination, GraphError> {
    let terms: Vec<JsonCombinationTerm> =
        serde_json::from_str(src).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let mut out = GraphCombination::new();
    for t in &terms {
        let c = parse_rational(&t.coeff)
            .map_err(|_| parse_err(0, format!("invalid coefficient `{}`", t.coeff)))?;
        out.add_term(c, DecoratedGraph::try_from(&t.graph)?);
    }
    Ok(out)
}

/// Text rendering of a combination, one `(coeff) [graph]` per line.
pub fn combination_to_text(c: &GraphCombination) -> String {
    if c.is_empty() {
        return "0\n".to_string();
    }
    c.iter()
        .map(|(g, q)| format!("({}) {}\n", rational_to_string(q), to_inline(g)))
        .collect()
}
