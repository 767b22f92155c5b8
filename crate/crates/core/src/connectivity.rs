//! Exact connectivity between tree nodes and external neighborhoods of graph
//! nodes, answered from SuperEdges and open-node sets without expanding
//! leaves.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, NodeId};
use crate::tree::{GraphTree, SuperNodeId, TreeError};

#[derive(Debug, Error)]
pub enum QueryError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("unknown graph node {0}")]
    UnknownNode(NodeId),
    #[error("query needs two distinct tree nodes, got {0} twice")]
    SameNode(SuperNodeId),
    #[error("supernode {ancestor} contains {descendant}; connectivity is only defined for disjoint closures")]
    Nested {
        ancestor: SuperNodeId,
        descendant: SuperNodeId,
    },
}

/// Where two disjoint tree nodes meet: their first common parent and the
/// children of it on the way down to each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeetingPoint {
    pub common_parent: SuperNodeId,
    pub child_a: SuperNodeId,
    pub child_b: SuperNodeId,
}

pub fn first_common_parent(tree: &GraphTree, a: SuperNodeId, b: SuperNodeId) -> Result<MeetingPoint, QueryError> {
    if a == b {
        tree.node(a)?;
        return Err(QueryError::SameNode(a));
    }
    let pa = tree.path_from_root(a)?;
    let pb = tree.path_from_root(b)?;
    let shared = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
    if shared == pa.len() {
        return Err(QueryError::Nested {
            ancestor: a,
            descendant: b,
        });
    }
    if shared == pb.len() {
        return Err(QueryError::Nested {
            ancestor: b,
            descendant: a,
        });
    }
    Ok(MeetingPoint {
        common_parent: pa[shared - 1],
        child_a: pa[shared],
        child_b: pb[shared],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityResult {
    pub a: SuperNodeId,
    pub b: SuperNodeId,
    pub meeting_point: MeetingPoint,
    /// `|open(a)| * |open(b)|`, the pairs a naive check would test.
    pub candidate_pairs: u64,
    /// Original edges joining the two closures, canonical and sorted.
    pub edges: Vec<Edge>,
}

impl ConnectivityResult {
    pub fn connected(&self) -> bool {
        !self.edges.is_empty()
    }

    pub fn weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

/// Every edge between the closures of `a` and `b`: the open-node pairs of
/// the two nodes that occur in the SuperEdge held at their first common
/// parent. Siblings are answered by that SuperEdge alone.
pub fn connectivity(tree: &GraphTree, a: SuperNodeId, b: SuperNodeId) -> Result<ConnectivityResult, QueryError> {
    if !tree.is_filled() {
        return Err(TreeError::NotFilled.into());
    }
    let mp = first_common_parent(tree, a, b)?;
    let open_a = tree.node(a)?.open_nodes();
    let open_b = tree.node(b)?.open_nodes();
    let candidate_pairs = open_a.len() as u64 * open_b.len() as u64;
    let superedge = tree
        .superedge(mp.common_parent, mp.child_a, mp.child_b)
        .ok_or(TreeError::NotFilled)?;
    let edges = if mp.child_a == a && mp.child_b == b {
        superedge.edges.clone()
    } else {
        let is_open = |set: &[NodeId], v: NodeId| set.binary_search(&v).is_ok();
        superedge
            .edges
            .iter()
            .filter(|e| {
                (is_open(open_a, e.source) && is_open(open_b, e.target))
                    || (is_open(open_a, e.target) && is_open(open_b, e.source))
            })
            .copied()
            .collect()
    };
    Ok(ConnectivityResult {
        a,
        b,
        meeting_point: mp,
        candidate_pairs,
        edges,
    })
}

/// The Cartesian product of the open nodes of `a` and `b` as canonical
/// `(min, max)` pairs, sorted. A superset of the connecting edges.
pub fn candidate_pairs(tree: &GraphTree, a: SuperNodeId, b: SuperNodeId) -> Result<Vec<(NodeId, NodeId)>, QueryError> {
    first_common_parent(tree, a, b)?;
    let open_a = tree.node(a)?.open_nodes();
    let open_b = tree.node(b)?.open_nodes();
    let mut pairs: Vec<(NodeId, NodeId)> = open_a
        .iter()
        .flat_map(|&x| open_b.iter().map(move |&y| if x < y { (x, y) } else { (y, x) }))
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}

/// One external neighbor of a graph node and where the connecting edge is
/// stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExternalNeighbor {
    pub neighbor: NodeId,
    pub edge: Edge,
    pub neighbor_leaf: SuperNodeId,
    /// Supernode holding the SuperEdge.
    pub resolved_at: SuperNodeId,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExternalNeighborhood {
    pub node: NodeId,
    pub leaf: SuperNodeId,
    /// Ascending by neighbor id.
    pub entries: Vec<ExternalNeighbor>,
    /// Ancestors inspected before the walk stopped.
    pub levels_walked: usize,
}

/// All neighbors of `v` outside its leaf, found by walking up from the leaf
/// and scanning the SuperEdges of each ancestor that touch the child on the
/// path. The walk stops at the first tree node where `v` is no longer open.
pub fn external_neighbors(tree: &GraphTree, v: NodeId) -> Result<ExternalNeighborhood, QueryError> {
    if !tree.is_filled() {
        return Err(TreeError::NotFilled.into());
    }
    let leaf = tree.leaf_of(v).ok_or(QueryError::UnknownNode(v))?;
    let mut entries = Vec::new();
    let mut child = leaf;
    let mut levels_walked = 0;
    while tree.node(child)?.is_open(v) {
        let Some(parent) = tree.node(child)?.parent() else { break };
        levels_walked += 1;
        let sn = tree.node(parent)?.as_super().expect("parents are supernodes");
        for (&(x, y), se) in &sn.superedges {
            if x != child && y != child {
                continue;
            }
            for e in se.edges.iter().filter(|e| e.touches(v)) {
                let neighbor = e.other(v).expect("edge touches v");
                entries.push(ExternalNeighbor {
                    neighbor,
                    edge: *e,
                    neighbor_leaf: tree.leaf_of(neighbor).expect("edge endpoints are indexed"),
                    resolved_at: parent,
                });
            }
        }
        child = parent;
    }
    entries.sort_by_key(|n| n.neighbor);
    Ok(ExternalNeighborhood {
        node: v,
        leaf,
        entries,
        levels_walked,
    })
}
