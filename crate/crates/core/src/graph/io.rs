//! Graph files: JSON `{"name"?, "vertices", "edges": [[u, v], ...]}` or a
//! plain edge list whose first line is `p <n>`, both 0-based.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            name: g.name().map(str::to_string),
            vertices: g.vertex_count(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let edges: Vec<_> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::new(j.vertices, &edges)?;
        Ok(match j.name {
            Some(n) => g.with_name(n),
            None => g,
        })
    }
}

pub fn from_json(text: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Graph::try_from(j)
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serializes")
}

/// Blank lines and lines starting with `#` are skipped.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["p", n] => n
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad vertex count {n:?}")))?,
        _ => return Err(Error::Parse(format!("expected `p <n>` header, got {header:?}"))),
    };
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("line {lineno}: {line:?}")))?;
        match nums[..] {
            [u, v] => edges.push((u, v)),
            _ => return Err(Error::Parse(format!("line {lineno}: expected two vertices"))),
        }
    }
    Graph::new(n, &edges)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("p {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// JSON if the text starts with `{`, edge list otherwise.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_edge_list(text)
    }
}
