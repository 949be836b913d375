//! Undirected graphs, their cut and density set functions, and equitable
//! vertex partitioning built on the solvers.

mod partition;

pub use partition::{partition_cut, partition_density, PartitionError, PartitionMode, PartitionResult, CUT_CALL_CONSTANT};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::items::{ItemSet, MAX_ITEMS};
use crate::value::Value;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph with {0} vertices exceeds the supported maximum of {MAX_ITEMS}")]
    TooManyVertices(usize),
    #[error("edge ({0}, {1}) references a vertex outside the graph")]
    BadVertex(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A simple undirected graph on at most [`MAX_ITEMS`] vertices.
///
/// Vertices double as items: a vertex subset is an [`ItemSet`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(repr: GraphRepr) -> Result<Self, GraphError> {
        Graph::new(repr.vertices, repr.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            vertices: g.vertices,
            edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Edges are stored as given; order does not matter for any set function.
    pub fn new<I>(vertices: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertices > MAX_ITEMS {
            return Err(GraphError::TooManyVertices(vertices));
        }
        let mut adjacency = vec![0u64; vertices];
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(GraphError::BadVertex(u, v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adjacency[u] >> v & 1 == 1 {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
            list.push((u, v));
        }
        Ok(Graph {
            vertices,
            edges: list,
            adjacency,
        })
    }

    pub fn path(vertices: usize) -> Self {
        Graph::new(vertices, (1..vertices).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn complete(vertices: usize) -> Self {
        let edges = (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v)));
        Graph::new(vertices, edges).expect("valid complete graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    /// Δ, the maximum degree (0 for an empty graph).
    pub fn max_degree(&self) -> usize {
        (0..self.vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges with exactly one endpoint in `set`.
    pub fn cut_edges(&self, set: ItemSet) -> usize {
        let inside = set.bits();
        set.iter()
            .map(|v| (self.adjacency[v] & !inside).count_ones() as usize)
            .sum()
    }

    /// Edges with both endpoints in `set`.
    pub fn internal_edges(&self, set: ItemSet) -> usize {
        let inside = set.bits();
        let twice: usize = set
            .iter()
            .map(|v| (self.adjacency[v] & inside).count_ones() as usize)
            .sum();
        twice / 2
    }

    /// Parses the edge-list text format: a header `p <vertices> <edges>`
    /// followed by one `u v` pair per line (0-based). Blank lines and lines
    /// starting with `c` or `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
                continue;
            }
            let err = |msg: &str| GraphError::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let number = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad number `{s}`")));
            if fields[0] == "p" {
                if header.is_some() {
                    return Err(err("duplicate header"));
                }
                if fields.len() != 3 {
                    return Err(err("header must be `p <num_vertices> <num_edges>`"));
                }
                header = Some((number(fields[1])?, number(fields[2])?));
                continue;
            }
            if header.is_none() {
                return Err(err("edge before `p` header"));
            }
            if fields.len() != 2 {
                return Err(err("edge line must be `u v`"));
            }
            edges.push((number(fields[0])?, number(fields[1])?));
        }
        let (vertices, edge_count) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `p` header".into(),
        })?;
        if edges.len() != edge_count {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {edge_count} edges, found {}", edges.len()),
            });
        }
        Graph::new(vertices, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {} {}\n", self.vertices, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Graph::parse_edge_list(s)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

/// δ(S): number of edges with exactly one endpoint in `set`.
pub fn cut_value(graph: &Graph, set: ItemSet) -> Value {
    Value::from(graph.cut_edges(set))
}

/// ρ(S) = |E(S)| / |S|, with ρ(∅) = 0.
pub fn density_value(graph: &Graph, set: ItemSet) -> Value {
    if set.is_empty() {
        return Value::ZERO;
    }
    Value::new(graph.internal_edges(set) as i64, set.len() as i64)
}
