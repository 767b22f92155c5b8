//! Flat undirected weighted graph and its text formats.
//!
//! Edges are stored once, in canonical orientation (smaller id first), sorted
//! by `(source, target)`. Node ids are arbitrary non-negative integers; a
//! dense index is kept internally but every public method speaks [`NodeId`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for NodeId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(NodeId)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

/// An undirected edge in canonical orientation: `source < target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, weight: f64) -> Result<Self, GraphError> {
        if a == b {
            return Err(GraphError::Loop { node: a, line: None });
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(GraphError::BadWeight { weight, line: None });
        }
        let (source, target) = if a < b { (a, b) } else { (b, a) };
        Ok(Edge {
            source,
            target,
            weight,
        })
    }

    pub fn key(&self) -> (NodeId, NodeId) {
        (self.source, self.target)
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(&self, v: NodeId) -> Option<NodeId> {
        if v == self.source {
            Some(self.target)
        } else if v == self.target {
            Some(self.source)
        } else {
            None
        }
    }

    pub fn touches(&self, v: NodeId) -> bool {
        self.source == v || self.target == v
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("{}loop edge on node {node}", line_prefix(*line))]
    Loop { node: NodeId, line: Option<usize> },
    #[error("{}edge weight must be positive and finite, got {weight}", line_prefix(*line))]
    BadWeight { weight: f64, line: Option<usize> },
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// Accumulates nodes and edges; duplicate pairs merge by summing weights.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<NodeId>,
    edges: HashMap<(NodeId, NodeId), f64>,
    labels: BTreeMap<NodeId, String>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, v: NodeId) -> &mut Self {
        self.nodes.push(v);
        self
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId, weight: f64) -> Result<&mut Self, GraphError> {
        let e = Edge::new(a, b, weight)?;
        *self.edges.entry(e.key()).or_insert(0.0) += weight;
        Ok(self)
    }

    pub fn set_label(&mut self, v: NodeId, label: impl Into<String>) -> &mut Self {
        self.nodes.push(v);
        self.labels.insert(v, label.into());
        self
    }

    pub fn build(self) -> Graph {
        let mut edges: Vec<Edge> = self
            .edges
            .into_iter()
            .map(|((source, target), weight)| Edge {
                source,
                target,
                weight,
            })
            .collect();
        edges.sort_unstable_by_key(Edge::key);
        let mut nodes = self.nodes;
        for e in &edges {
            nodes.push(e.source);
            nodes.push(e.target);
        }
        Graph::from_parts(nodes, edges, self.labels)
    }
}

/// Immutable undirected graph with a CSR adjacency index.
#[derive(Debug, Clone)]
pub struct Graph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, u32>,
    labels: BTreeMap<NodeId, String>,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    // (neighbor dense index, edge index)
    adjacency: Vec<(u32, u32)>,
}

impl Graph {
    /// `edges` must already be canonical, deduplicated and sorted.
    fn from_parts(mut ids: Vec<NodeId>, edges: Vec<Edge>, labels: BTreeMap<NodeId, String>) -> Graph {
        ids.sort_unstable();
        ids.dedup();
        let index: HashMap<NodeId, u32> =
            ids.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let n = ids.len();
        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[index[&e.source] as usize] += 1;
            degree[index[&e.target] as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adjacency = vec![(0u32, 0u32); offsets[n]];
        for (ei, e) in edges.iter().enumerate() {
            let s = index[&e.source];
            let t = index[&e.target];
            adjacency[fill[s as usize]] = (t, ei as u32);
            fill[s as usize] += 1;
            adjacency[fill[t as usize]] = (s, ei as u32);
            fill[t as usize] += 1;
        }
        // Edges are sorted, so each row ends up sorted by neighbor except
        // where the row's node is the target; sort rows for determinism.
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            ids,
            index,
            labels,
            edges,
            offsets,
            adjacency,
        }
    }

    /// Graph from `(a, b)` pairs with unit weights. Mostly for tests.
    pub fn from_pairs<I>(pairs: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut b = GraphBuilder::new();
        for (s, t) in pairs {
            b.add_edge(NodeId(s), NodeId(t), 1.0)?;
        }
        Ok(b.build())
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All node ids, ascending.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    /// All edges, canonical and sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<NodeId, String> {
        &self.labels
    }

    pub fn index_of(&self, v: NodeId) -> Option<usize> {
        self.index.get(&v).map(|&i| i as usize)
    }

    pub fn id_at(&self, i: usize) -> NodeId {
        self.ids[i]
    }

    pub fn degree(&self, v: NodeId) -> Option<usize> {
        self.index_of(v).map(|i| self.offsets[i + 1] - self.offsets[i])
    }

    pub(crate) fn degree_dense(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Neighbors of dense node `i` as `(neighbor dense index, edge)`.
    pub(crate) fn neighbors_dense(&self, i: usize) -> impl Iterator<Item = (usize, &Edge)> + '_ {
        self.adjacency[self.offsets[i]..self.offsets[i + 1]]
            .iter()
            .map(move |&(j, ei)| (j as usize, &self.edges[ei as usize]))
    }

    /// Neighbors of `v` with the connecting edge, ascending by neighbor id.
    pub fn neighbors(&self, v: NodeId) -> Result<impl Iterator<Item = (NodeId, &Edge)> + '_, GraphError> {
        let i = self.index_of(v).ok_or(GraphError::UnknownNode(v))?;
        Ok(self.neighbors_dense(i).map(move |(j, e)| (self.ids[j], e)))
    }

    /// Subgraph induced by `members`; ids absent from the graph are ignored.
    pub fn induced(&self, members: &[NodeId]) -> Graph {
        let mut keep = vec![false; self.node_count()];
        let mut ids = Vec::with_capacity(members.len());
        for &v in members {
            if let Some(i) = self.index_of(v) {
                keep[i] = true;
                ids.push(v);
            }
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| keep[self.index[&e.source] as usize] && keep[self.index[&e.target] as usize])
            .copied()
            .collect();
        let labels = ids
            .iter()
            .filter_map(|v| self.labels.get(v).map(|l| (*v, l.clone())))
            .collect();
        Graph::from_parts(ids, edges, labels)
    }

    /// Assemble from already-canonical parts, as read back from a store file.
    pub(crate) fn from_canonical(
        nodes: Vec<NodeId>,
        mut edges: Vec<Edge>,
        labels: BTreeMap<NodeId, String>,
    ) -> Graph {
        edges.sort_unstable_by_key(Edge::key);
        Graph::from_parts(nodes, edges, labels)
    }
}

/// Parse an edge list (and optional labels file) from disk.
pub fn load_graph(edge_path: &Path, labels_path: Option<&Path>) -> Result<Graph, GraphError> {
    let file = File::open(edge_path).map_err(|source| GraphError::Io {
        path: edge_path.to_path_buf(),
        source,
    })?;
    let mut builder = GraphBuilder::new();
    read_edge_list(BufReader::new(file), &mut builder).map_err(|e| with_path(e, edge_path))?;
    if let Some(lp) = labels_path {
        let file = File::open(lp).map_err(|source| GraphError::Io {
            path: lp.to_path_buf(),
            source,
        })?;
        read_labels(BufReader::new(file), &mut builder).map_err(|e| with_path(e, lp))?;
    }
    Ok(builder.build())
}

fn with_path(e: GraphError, path: &Path) -> GraphError {
    match e {
        GraphError::Io { source, .. } => GraphError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    }
}

fn significant(line: &str) -> Option<&str> {
    let t = line.trim_end_matches(['\r', '\n']);
    if t.trim().is_empty() || t.trim_start().starts_with('#') {
        None
    } else {
        Some(t)
    }
}

/// Read `src<TAB>dst[<TAB>weight]` lines into `builder`.
pub fn read_edge_list<R: BufRead>(reader: R, builder: &mut GraphBuilder) -> Result<(), GraphError> {
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|source| GraphError::Io {
            path: PathBuf::new(),
            source,
        })?;
        let Some(body) = significant(&line) else {
            continue;
        };
        let fields: Vec<&str> = body.split('\t').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(GraphError::Malformed {
                line: lineno,
                reason: format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let parse_id = |s: &str| {
            s.parse::<u64>().map(NodeId).map_err(|_| GraphError::Malformed {
                line: lineno,
                reason: format!("invalid node id {s:?}"),
            })
        };
        let a = parse_id(fields[0])?;
        let b = parse_id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| GraphError::Malformed {
                line: lineno,
                reason: format!("invalid weight {s:?}"),
            })?,
            None => 1.0,
        };
        builder.add_edge(a, b, w).map_err(|e| match e {
            GraphError::Loop { node, .. } => GraphError::Loop {
                node,
                line: Some(lineno),
            },
            GraphError::BadWeight { weight, .. } => GraphError::BadWeight {
                weight,
                line: Some(lineno),
            },
            other => other,
        })?;
    }
    Ok(())
}

/// Read `id<TAB>label` lines. Labelled ids absent from the edge list become
/// isolated nodes.
pub fn read_labels<R: BufRead>(reader: R, builder: &mut GraphBuilder) -> Result<(), GraphError> {
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|source| GraphError::Io {
            path: PathBuf::new(),
            source,
        })?;
        let Some(body) = significant(&line) else {
            continue;
        };
        let Some((id, label)) = body.split_once('\t') else {
            return Err(GraphError::Malformed {
                line: lineno,
                reason: "expected id<TAB>label".into(),
            });
        };
        let id = id.trim().parse::<u64>().map_err(|_| GraphError::Malformed {
            line: lineno,
            reason: format!("invalid node id {id:?}"),
        })?;
        builder.set_label(NodeId(id), label.trim());
    }
    Ok(())
}

/// Write the canonical edge list: sorted edges, weight only when it is not 1.
pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    for e in g.edges() {
        if e.weight == 1.0 {
            writeln!(out, "{}\t{}", e.source, e.target)?;
        } else {
            writeln!(out, "{}\t{}\t{}", e.source, e.target, e.weight)?;
        }
    }
    Ok(())
}

/// Write `id<TAB>label` lines, ascending by id.
pub fn write_labels<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    for (id, label) in g.labels() {
        writeln!(out, "{id}\t{label}")?;
    }
    Ok(())
}
