//! Query engine shared by the CLI and the HTTP service, so both produce the
//! same answers from the same code.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;
use serde::Serialize;

use crate::connectivity::{self, ExternalNeighborhood, MeetingPoint, QueryError};
use crate::error::Result;
use crate::graph::{Edge, NodeId};
use crate::layout::{self, HierarchyLayout, LeafLayout};
use crate::metrics::{self, MetricsReport};
use crate::tree::{load_tree, parse_leaf_file, CacheStats, GraphTree, SuperNodeId, TreeNode};

#[derive(Debug, Clone, Serialize)]
pub struct NodeSummary {
    pub id: SuperNodeId,
    pub kind: &'static str,
    pub parent: Option<SuperNodeId>,
    pub children: Vec<SuperNodeId>,
    pub depth: usize,
    pub closure_size: usize,
    pub open_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeView {
    pub root: SuperNodeId,
    pub k: usize,
    pub levels: usize,
    pub node_count: usize,
    pub edge_count: usize,
    pub leaf_count: usize,
    pub nodes: Vec<NodeSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuperEdgeSummary {
    pub a: SuperNodeId,
    pub b: SuperNodeId,
    pub weight: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuperNodeView {
    #[serde(flatten)]
    pub summary: NodeSummary,
    pub open_nodes: Vec<NodeId>,
    /// Present for supernodes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superedges: Option<Vec<SuperEdgeSummary>>,
    /// Present for leaves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<NodeId>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loaded: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureView {
    pub id: SuperNodeId,
    pub size: usize,
    pub nodes: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityView {
    pub a: SuperNodeId,
    pub b: SuperNodeId,
    pub meeting_point: MeetingPoint,
    /// Number of connecting edges.
    pub weight: usize,
    /// Sum of the connecting edges' weights.
    pub total_weight: f64,
    pub candidate_pairs: u64,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    pub node: NodeId,
    pub label: String,
    /// Root first, owning leaf last.
    pub path: Vec<SuperNodeId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeafStatus {
    pub leaf: SuperNodeId,
    pub loaded: bool,
    pub members: usize,
    pub cache: CacheStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeDegree {
    pub node: NodeId,
    pub internal: usize,
    pub external: usize,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeafMetrics {
    pub leaf: SuperNodeId,
    pub nodes: usize,
    pub internal_edges: usize,
    #[serde(flatten)]
    pub report: MetricsReport,
    pub degrees: Vec<NodeDegree>,
}

struct LabelEntry {
    node: NodeId,
    folded: String,
    label: String,
}

pub struct Engine {
    tree: GraphTree,
    layouts: Mutex<HashMap<(SuperNodeId, u64, usize), Arc<LeafLayout>>>,
    hierarchy: OnceLock<Arc<HierarchyLayout>>,
    labels: OnceLock<std::result::Result<Vec<LabelEntry>, String>>,
}

fn summary(n: &TreeNode) -> NodeSummary {
    NodeSummary {
        id: n.id(),
        kind: if n.is_leaf() { "leaf" } else { "super" },
        parent: n.parent(),
        children: n.children().to_vec(),
        depth: n.depth(),
        closure_size: n.closure_size(),
        open_count: n.open_nodes().len(),
    }
}

impl Engine {
    pub fn new(tree: GraphTree) -> Self {
        Engine {
            tree,
            layouts: Mutex::new(HashMap::new()),
            hierarchy: OnceLock::new(),
            labels: OnceLock::new(),
        }
    }

    pub fn open(dir: &Path, cache_leaves: usize) -> Result<Self> {
        Ok(Engine::new(load_tree(dir, cache_leaves)?))
    }

    pub fn tree(&self) -> &GraphTree {
        &self.tree
    }

    pub fn tree_view(&self) -> TreeView {
        let t = &self.tree;
        TreeView {
            root: t.root(),
            k: t.k(),
            levels: t.levels(),
            node_count: t.node_count(),
            edge_count: t.edge_count(),
            leaf_count: t.leaf_count(),
            nodes: t.nodes().iter().map(summary).collect(),
        }
    }

    pub fn supernode(&self, id: SuperNodeId) -> Result<SuperNodeView> {
        let n = self.tree.node(id)?;
        let mut view = SuperNodeView {
            summary: summary(n),
            open_nodes: n.open_nodes().to_vec(),
            superedges: None,
            members: None,
            loaded: None,
        };
        match n {
            TreeNode::Super(s) => {
                view.superedges = Some(
                    s.superedges
                        .values()
                        .map(|se| SuperEdgeSummary {
                            a: se.side_a,
                            b: se.side_b,
                            weight: se.weight(),
                        })
                        .collect(),
                );
            }
            TreeNode::Leaf(l) => {
                view.members = Some(l.members.clone());
                view.loaded = Some(self.tree.is_loaded(id));
            }
        }
        Ok(view)
    }

    pub fn closure(&self, id: SuperNodeId) -> Result<ClosureView> {
        let nodes = self.tree.closure(id)?;
        Ok(ClosureView {
            id,
            size: nodes.len(),
            nodes,
        })
    }

    pub fn connectivity(&self, a: SuperNodeId, b: SuperNodeId) -> Result<ConnectivityView> {
        let r = connectivity::connectivity(&self.tree, a, b)?;
        Ok(ConnectivityView {
            a: r.a,
            b: r.b,
            meeting_point: r.meeting_point,
            weight: r.edges.len(),
            total_weight: r.weight(),
            candidate_pairs: r.candidate_pairs,
            edges: r.edges,
        })
    }

    pub fn external(&self, v: NodeId) -> Result<ExternalNeighborhood> {
        Ok(connectivity::external_neighbors(&self.tree, v)?)
    }

    fn label_index(&self) -> Result<&[LabelEntry]> {
        let built = self.labels.get_or_init(|| {
            let mut out = Vec::new();
            for leaf in self.tree.leaves() {
                let parsed = parse_leaf_file(&leaf.leaf_file).map_err(|e| e.to_string())?;
                for (node, label) in parsed.labels {
                    out.push(LabelEntry {
                        node,
                        folded: label.to_lowercase(),
                        label,
                    });
                }
            }
            out.sort_by_key(|e| e.node);
            Ok(out)
        });
        built
            .as_deref()
            .map_err(|e| crate::error::Error::Usage(format!("label index unavailable: {e}")))
    }

    /// Case-insensitive substring search over node labels, by node id.
    pub fn search(&self, query: &str) -> Result<Vec<SearchHit>> {
        let needle = query.to_lowercase();
        let mut hits = Vec::new();
        for e in self.label_index()? {
            if e.folded.contains(&needle) {
                let leaf = self.tree.leaf_of(e.node).ok_or(QueryError::UnknownNode(e.node))?;
                hits.push(SearchHit {
                    node: e.node,
                    label: e.label.clone(),
                    path: self.tree.path_from_root(leaf)?,
                });
            }
        }
        Ok(hits)
    }

    fn status(&self, leaf: SuperNodeId) -> Result<LeafStatus> {
        Ok(LeafStatus {
            leaf,
            loaded: self.tree.is_loaded(leaf),
            members: self.tree.leaf(leaf)?.members.len(),
            cache: self.tree.cache_stats(),
        })
    }

    pub fn expand(&self, leaf: SuperNodeId) -> Result<LeafStatus> {
        self.tree.expand_leaf(leaf)?;
        self.status(leaf)
    }

    pub fn collapse(&self, leaf: SuperNodeId) -> Result<LeafStatus> {
        self.tree.collapse_leaf(leaf)?;
        self.status(leaf)
    }

    /// Layout of a loaded leaf, cached per `(leaf, seed, iterations)`.
    pub fn leaf_layout(&self, leaf: SuperNodeId, seed: u64, iterations: usize) -> Result<Arc<LeafLayout>> {
        let sub = self.tree.loaded_leaf(leaf)?;
        let key = (leaf, seed, iterations);
        if let Some(l) = self.layouts.lock().get(&key) {
            return Ok(l.clone());
        }
        let computed = Arc::new(layout::layout_leaf(&sub, seed, iterations));
        Ok(self.layouts.lock().entry(key).or_insert(computed).clone())
    }

    /// Metrics of a loaded leaf, with each member's full degree split into
    /// leaf-internal and external parts.
    pub fn leaf_metrics(&self, leaf: SuperNodeId) -> Result<LeafMetrics> {
        let sub = self.tree.loaded_leaf(leaf)?;
        let g = &sub.graph;
        let mut degrees = Vec::with_capacity(g.node_count());
        for &v in g.nodes() {
            let internal = g.degree(v).unwrap_or(0);
            let external = connectivity::external_neighbors(&self.tree, v)?.entries.len();
            degrees.push(NodeDegree {
                node: v,
                internal,
                external,
                degree: internal + external,
            });
        }
        Ok(LeafMetrics {
            leaf,
            nodes: g.node_count(),
            internal_edges: g.edge_count(),
            report: metrics::metrics(g),
            degrees,
        })
    }

    pub fn hierarchy_layout(&self) -> Arc<HierarchyLayout> {
        self.hierarchy
            .get_or_init(|| Arc::new(layout::layout_hierarchy(&self.tree)))
            .clone()
    }

    pub fn cache_stats(&self) -> CacheStats {
        self.tree.cache_stats()
    }
}
