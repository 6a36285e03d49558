//! Graph documents: JSON (`{"n":..,"edges":[[u,v],..],"labels":[..]}`), plain
//! edge lists (`n` on the first line, then `u v` per line, `#` comments) and
//! DOT export.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Graph, SimpleGraph};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GraphDocument {
    pub fn to_graph(&self) -> Result<SimpleGraph> {
        let edges: Vec<_> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let g = SimpleGraph::from_edges(self.n, &edges)?;
        match &self.labels {
            Some(labels) => g.with_labels(labels.clone()),
            None => Ok(g),
        }
    }
}

impl From<&SimpleGraph> for GraphDocument {
    fn from(g: &SimpleGraph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            labels: g.labels().map(<[String]>::to_vec),
        }
    }
}

/// Parses either format; a document whose first non-blank character is `{` is
/// read as JSON. Disconnected graphs are accepted.
pub fn parse_simple_graph(text: &str) -> Result<SimpleGraph> {
    if text.trim_start().starts_with('{') {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.to_graph()
    } else {
        parse_edge_list(text)
    }
}

/// Like [`parse_simple_graph`] but requires a connected graph.
pub fn parse_graph(text: &str) -> Result<Graph> {
    Graph::new(parse_simple_graph(text)?)
}

fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::Parse(format!("first line must be the vertex count, got `{first}`")))?;
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parsed: Vec<usize> = parts.iter().filter_map(|p| p.parse().ok()).collect();
        if parts.len() != 2 || parsed.len() != 2 {
            return Err(Error::Parse(format!("line {lineno}: expected `u v`, got `{line}`")));
        }
        edges.push((parsed[0], parsed[1]));
    }
    SimpleGraph::from_edges(n, &edges)
}

#[derive(Debug, Clone, Default)]
pub struct DotOptions<'a> {
    pub name: Option<&'a str>,
    /// Per-vertex weights, emitted as `measure="p/q"` attributes.
    pub measure: Option<&'a [Rational]>,
}

pub fn to_dot(g: &SimpleGraph, options: &DotOptions<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", options.name.unwrap_or("G"));
    for v in 0..g.n() {
        let label = g
            .labels()
            .map(|l| l[v].clone())
            .unwrap_or_else(|| v.to_string());
        let _ = write!(out, "  {v} [label=\"{}\"", escape(&label));
        if let Some(m) = options.measure {
            let _ = write!(out, ", measure=\"{}\"", m[v]);
        }
        out.push_str("];\n");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
