//! The SuperGraph stored as a Graph-Tree.
//!
//! Internal tree nodes are [`SuperNode`]s holding the [`SuperEdge`]s among
//! their children; the bottom level is made of [`LeafSuperNode`]s whose
//! induced subgraphs live in one file each and are loaded on demand through
//! an LRU cache. Every tree node materializes its open-node set: the members
//! of its closure with at least one edge leaving the closure.

mod assemble;
mod cache;
mod fill;
mod store;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, NodeId};

pub use assemble::assemble_tree;
pub use cache::{CacheStats, LeafSubgraph, DEFAULT_CACHE_LEAVES};
pub use fill::{fill_graph_tree, FillReport};
pub use store::{load_tree, save_tree, verify_store_checksums, CHECKSUMS_FILE, FORMAT_VERSION, MANIFEST_FILE};

pub(crate) use cache::LeafCache;
pub(crate) use store::{parse_leaf_file, parse_manifest, parse_superedge_file, ManifestEntry};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct SuperNodeId(pub u32);

impl fmt::Display for SuperNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for SuperNodeId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(SuperNodeId)
    }
}

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("plan does not match graph: {0}")]
    PlanMismatch(String),
    #[error("unknown supernode {0}")]
    UnknownSuperNode(SuperNodeId),
    #[error("supernode {0} is not a leaf")]
    NotALeaf(SuperNodeId),
    #[error("leaf {0} is not loaded")]
    NotLoaded(SuperNodeId),
    #[error("edge ({}, {}) has endpoint {node} outside every leaf", edge.0, edge.1)]
    UnknownEndpoint { node: NodeId, edge: (NodeId, NodeId) },
    #[error("edge ({}, {}) reached supernode {at} from one side only", edge.0, edge.1)]
    UnmatchedEdge { edge: (NodeId, NodeId), at: SuperNodeId },
    #[error("{count} external edge records left unresolved at the root")]
    ResidualAtRoot { count: usize },
    #[error("tree has not been filled")]
    NotFilled,
    #[error("unsupported store format {found:?}, expected {expected:?}")]
    VersionMismatch { found: String, expected: String },
    #[error("checksum mismatch for {path}")]
    Checksum { path: PathBuf },
    #[error("leaf {leaf}: missing subgraph file {path}")]
    MissingLeafFile { leaf: SuperNodeId, path: PathBuf },
    #[error("{path}:{line}: {reason}")]
    Corrupt { path: PathBuf, line: usize, reason: String },
}

impl TreeError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        TreeError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn corrupt(path: &Path, line: usize, reason: impl Into<String>) -> Self {
        TreeError::Corrupt {
            path: path.to_path_buf(),
            line,
            reason: reason.into(),
        }
    }
}

/// Original edges crossing two sibling tree nodes, or the internal edges of
/// one leaf (both sides equal).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperEdge {
    pub side_a: SuperNodeId,
    pub side_b: SuperNodeId,
    /// Canonical and sorted.
    pub edges: Vec<Edge>,
}

impl SuperEdge {
    pub fn empty(side_a: SuperNodeId, side_b: SuperNodeId) -> Self {
        SuperEdge {
            side_a,
            side_b,
            edges: Vec::new(),
        }
    }

    /// The number of original edges held.
    pub fn weight(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperNode {
    pub id: SuperNodeId,
    pub parent: Option<SuperNodeId>,
    /// All leaves or all supernodes, never mixed.
    pub children: Vec<SuperNodeId>,
    /// One entry per unordered child pair `(a, b)` with `a < b`.
    pub superedges: BTreeMap<(SuperNodeId, SuperNodeId), SuperEdge>,
    /// Ascending.
    pub open_nodes: Vec<NodeId>,
    pub depth: usize,
    pub closure_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeafSuperNode {
    pub id: SuperNodeId,
    pub parent: SuperNodeId,
    /// Ascending.
    pub members: Vec<NodeId>,
    /// Ascending.
    pub open_nodes: Vec<NodeId>,
    pub leaf_file: PathBuf,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Super(SuperNode),
    Leaf(LeafSuperNode),
}

impl TreeNode {
    pub fn id(&self) -> SuperNodeId {
        match self {
            TreeNode::Super(s) => s.id,
            TreeNode::Leaf(l) => l.id,
        }
    }

    pub fn parent(&self) -> Option<SuperNodeId> {
        match self {
            TreeNode::Super(s) => s.parent,
            TreeNode::Leaf(l) => Some(l.parent),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Super(s) => s.depth,
            TreeNode::Leaf(l) => l.depth,
        }
    }

    pub fn open_nodes(&self) -> &[NodeId] {
        match self {
            TreeNode::Super(s) => &s.open_nodes,
            TreeNode::Leaf(l) => &l.open_nodes,
        }
    }

    pub fn is_open(&self, v: NodeId) -> bool {
        self.open_nodes().binary_search(&v).is_ok()
    }

    pub fn closure_size(&self) -> usize {
        match self {
            TreeNode::Super(s) => s.closure_size,
            TreeNode::Leaf(l) => l.members.len(),
        }
    }

    pub fn children(&self) -> &[SuperNodeId] {
        match self {
            TreeNode::Super(s) => &s.children,
            TreeNode::Leaf(_) => &[],
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf(_))
    }

    pub fn as_super(&self) -> Option<&SuperNode> {
        match self {
            TreeNode::Super(s) => Some(s),
            TreeNode::Leaf(_) => None,
        }
    }

    pub fn as_leaf(&self) -> Option<&LeafSuperNode> {
        match self {
            TreeNode::Leaf(l) => Some(l),
            TreeNode::Super(_) => None,
        }
    }
}

/// Ids are dense: `nodes[i].id() == SuperNodeId(i)`, numbered breadth-first
/// from the root.
#[derive(Debug)]
pub struct GraphTree {
    root: SuperNodeId,
    nodes: Vec<TreeNode>,
    node_index: HashMap<NodeId, SuperNodeId>,
    store_dir: PathBuf,
    k: usize,
    levels: usize,
    node_count: usize,
    edge_count: usize,
    filled: bool,
    cache: LeafCache,
    /// Expected sha256 per store-relative path; empty until saved or loaded.
    checksums: BTreeMap<String, String>,
}

impl GraphTree {
    pub fn root(&self) -> SuperNodeId {
        self.root
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// |V| of the underlying graph.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// |E| of the underlying graph.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn store_dir(&self) -> &Path {
        &self.store_dir
    }

    pub fn is_filled(&self) -> bool {
        self.filled
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: SuperNodeId) -> Result<&TreeNode, TreeError> {
        self.nodes
            .get(id.0 as usize)
            .ok_or(TreeError::UnknownSuperNode(id))
    }

    pub fn leaf(&self, id: SuperNodeId) -> Result<&LeafSuperNode, TreeError> {
        self.node(id)?.as_leaf().ok_or(TreeError::NotALeaf(id))
    }

    pub fn leaves(&self) -> impl Iterator<Item = &LeafSuperNode> + '_ {
        self.nodes.iter().filter_map(TreeNode::as_leaf)
    }

    pub fn supernodes(&self) -> impl Iterator<Item = &SuperNode> + '_ {
        self.nodes.iter().filter_map(TreeNode::as_super)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// The leaf holding graph node `v`.
    pub fn leaf_of(&self, v: NodeId) -> Option<SuperNodeId> {
        self.node_index.get(&v).copied()
    }

    fn parent_of(&self, id: SuperNodeId) -> Option<SuperNodeId> {
        self.nodes[id.0 as usize].parent()
    }

    /// All graph nodes under `id`, ascending.
    pub fn closure(&self, id: SuperNodeId) -> Result<Vec<NodeId>, TreeError> {
        let node = self.node(id)?;
        let mut out = Vec::with_capacity(node.closure_size());
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            match &self.nodes[n.0 as usize] {
                TreeNode::Leaf(l) => out.extend_from_slice(&l.members),
                TreeNode::Super(s) => stack.extend(s.children.iter().copied()),
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Ancestors of `id`, immediate parent first and root last.
    pub fn parents(&self, id: SuperNodeId) -> Result<Vec<SuperNodeId>, TreeError> {
        self.node(id)?;
        let mut out = Vec::new();
        let mut cur = self.parent_of(id);
        while let Some(p) = cur {
            out.push(p);
            cur = self.parent_of(p);
        }
        Ok(out)
    }

    /// Root-to-`id` path, both ends included.
    pub fn path_from_root(&self, id: SuperNodeId) -> Result<Vec<SuperNodeId>, TreeError> {
        let mut path = self.parents(id)?;
        path.reverse();
        path.push(id);
        Ok(path)
    }

    /// Whether `ancestor` is a strict ancestor of `node`.
    pub fn is_ancestor(&self, ancestor: SuperNodeId, node: SuperNodeId) -> bool {
        self.child_toward(ancestor, node).is_some()
    }

    /// The child of `ancestor` whose subtree contains `node`, if `ancestor`
    /// is a strict ancestor. O(depth).
    pub fn child_toward(&self, ancestor: SuperNodeId, node: SuperNodeId) -> Option<SuperNodeId> {
        let target_depth = self.nodes.get(ancestor.0 as usize)?.depth() + 1;
        let mut cur = node;
        let mut cur_depth = self.nodes.get(cur.0 as usize)?.depth();
        if cur_depth < target_depth {
            return None;
        }
        while cur_depth > target_depth {
            cur = self.parent_of(cur)?;
            cur_depth -= 1;
        }
        (self.parent_of(cur) == Some(ancestor)).then_some(cur)
    }

    /// Whether graph node `v` lies in the closure of `id`. O(depth).
    pub fn in_closure(&self, v: NodeId, id: SuperNodeId) -> bool {
        match self.leaf_of(v) {
            Some(leaf) => leaf == id || self.is_ancestor(id, leaf),
            None => false,
        }
    }

    /// The SuperEdge held by `parent` between children `a` and `b`.
    pub fn superedge(&self, parent: SuperNodeId, a: SuperNodeId, b: SuperNodeId) -> Option<&SuperEdge> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.node(parent).ok()?.as_super()?.superedges.get(&key)
    }

    /// Load a leaf's subgraph, serving from the cache when resident.
    pub fn expand_leaf(&self, id: SuperNodeId) -> Result<Arc<LeafSubgraph>, TreeError> {
        let leaf = self.leaf(id)?;
        self.cache.get_or_load(id, || store::read_leaf_subgraph(self, leaf))
    }

    /// Release a leaf's subgraph. Collapsing an unloaded leaf is a no-op.
    pub fn collapse_leaf(&self, id: SuperNodeId) -> Result<bool, TreeError> {
        self.leaf(id)?;
        Ok(self.cache.release(id))
    }

    /// The loaded subgraph of a leaf, without loading it.
    pub fn loaded_leaf(&self, id: SuperNodeId) -> Result<Arc<LeafSubgraph>, TreeError> {
        self.leaf(id)?;
        self.cache.peek(id).ok_or(TreeError::NotLoaded(id))
    }

    pub fn is_loaded(&self, id: SuperNodeId) -> bool {
        self.cache.peek(id).is_some()
    }

    pub fn cache_stats(&self) -> CacheStats {
        self.cache.stats()
    }

    /// Change the leaf cache capacity, evicting as needed.
    pub fn set_cache_capacity(&mut self, capacity: usize) {
        self.cache.set_capacity(capacity);
    }
}
