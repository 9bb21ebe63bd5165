//! Graph file formats: the `n m` edge list and canonical JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonGraph {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for JsonGraph {
    fn from(g: &Graph) -> Self {
        JsonGraph {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<&JsonGraph> for Graph {
    type Error = Error;

    fn try_from(j: &JsonGraph) -> Result<Graph> {
        Graph::from_edges(j.n, j.edges.iter().map(|e| (e[0], e[1])))
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty input".into(),
    })?;
    let [n, m] = parse_pair(hl, header)?;
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (line, l) in lines {
        let [u, v] = parse_pair(line, l)?;
        g.add_edge(u, v).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        count += 1;
    }
    if count != m {
        return Err(Error::Parse {
            line: hl,
            message: format!("header announces {m} edges, found {count}"),
        });
    }
    Ok(g)
}

fn parse_pair(line: usize, l: &str) -> Result<[usize; 2]> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    let err = |message: String| Error::Parse { line, message };
    if parts.len() != 2 {
        return Err(err(format!("expected two integers, got {:?}", l)));
    }
    let a = parts[0].parse().map_err(|_| err(format!("bad integer {:?}", parts[0])))?;
    let b = parts[1].parse().map_err(|_| err(format!("bad integer {:?}", parts[1])))?;
    Ok([a, b])
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_json(text: &str) -> Result<Graph> {
    let j: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    Graph::try_from(&j)
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&JsonGraph::from(g)).expect("graph serializes")
}

/// Parses either format, choosing JSON when the first non-blank byte is `{`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}
