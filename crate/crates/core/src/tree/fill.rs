use std::collections::{BTreeMap, HashMap};
use std::fs;

use serde::Serialize;

use super::store::{self, STAGING_DIR};
use super::{GraphTree, SuperEdge, SuperNodeId, TreeError, TreeNode};
use crate::graph::{Edge, NodeId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FillReport {
    /// Edges with both endpoints in one leaf.
    pub internal_edges: usize,
    /// Edges stored in SuperEdges between siblings.
    pub cross_edges: usize,
    /// Records left unmatched at the root; 0 whenever fill succeeds.
    pub residual_at_root: usize,
}

/// An edge seen from one side: the endpoint inside the current subtree.
type Record = (Edge, NodeId);

fn open_of(records: &[Record]) -> Vec<NodeId> {
    let mut open: Vec<NodeId> = records.iter().map(|r| r.1).collect();
    open.sort_unstable();
    open.dedup();
    open
}

type Match = ((SuperNodeId, SuperNodeId), Edge, u8);

/// Fill SuperEdges and open-node sets bottom-up.
///
/// Every leaf starts with its spilled external edges. At each supernode a
/// record whose other endpoint lies under a sibling is matched into the
/// SuperEdge of that child pair; unmatched records propagate upward and mark
/// their inside endpoint as open.
pub fn fill_graph_tree(tree: &mut GraphTree) -> Result<FillReport, TreeError> {
    let mut report = FillReport::default();
    let mut order = Vec::with_capacity(tree.nodes.len());
    let mut stack = vec![tree.root];
    while let Some(id) = stack.pop() {
        order.push(id);
        stack.extend_from_slice(tree.nodes[id.0 as usize].children());
    }

    let mut pending: HashMap<SuperNodeId, Vec<Record>> = HashMap::new();
    for &id in order.iter().rev() {
        let (records, superedges) = match &tree.nodes[id.0 as usize] {
            TreeNode::Leaf(leaf) => {
                let text = fs::read_to_string(&leaf.leaf_file).map_err(|e| TreeError::io(&leaf.leaf_file, e))?;
                report.internal_edges += text.lines().filter(|l| l.starts_with("E ")).count();
                let records = store::parse_spill(&store::spill_path(&tree.store_dir, id))?;
                for (e, inside) in &records {
                    let outside = e.other(*inside).expect("endpoint on edge");
                    if tree.leaf_of(*inside) != Some(id) {
                        return Err(TreeError::UnknownEndpoint {
                            node: *inside,
                            edge: e.key(),
                        });
                    }
                    match tree.leaf_of(outside) {
                        None => {
                            return Err(TreeError::UnknownEndpoint {
                                node: outside,
                                edge: e.key(),
                            })
                        }
                        Some(l) if l == id => return Err(TreeError::UnmatchedEdge { edge: e.key(), at: id }),
                        Some(_) => {}
                    }
                }
                (records, None)
            }
            TreeNode::Super(sn) => {
                let mut up = Vec::new();
                // canonical edge -> (child pair, edge, sides seen)
                let mut matched: HashMap<(NodeId, NodeId), Match> = HashMap::new();
                for &c in &sn.children {
                    for (e, inside) in pending.remove(&c).unwrap_or_default() {
                        let outside = e.other(inside).expect("endpoint on edge");
                        let leaf = tree.leaf_of(outside).expect("checked at leaf");
                        match tree.child_toward(id, leaf) {
                            Some(d) => {
                                let pair = if c < d { (c, d) } else { (d, c) };
                                matched.entry(e.key()).or_insert((pair, e, 0)).2 += 1;
                            }
                            None => up.push((e, inside)),
                        }
                    }
                }
                let mut superedges = BTreeMap::new();
                for (x, &a) in sn.children.iter().enumerate() {
                    for &b in &sn.children[x + 1..] {
                        let key = if a < b { (a, b) } else { (b, a) };
                        superedges.insert(key, SuperEdge::empty(key.0, key.1));
                    }
                }
                for (key, (pair, e, seen)) in matched {
                    if seen != 2 {
                        return Err(TreeError::UnmatchedEdge { edge: key, at: id });
                    }
                    superedges.get_mut(&pair).expect("child pair").edges.push(e);
                }
                for se in superedges.values_mut() {
                    se.edges.sort_unstable_by_key(Edge::key);
                    report.cross_edges += se.edges.len();
                }
                (up, Some(superedges))
            }
        };
        let open = open_of(&records);
        match &mut tree.nodes[id.0 as usize] {
            TreeNode::Leaf(l) => l.open_nodes = open,
            TreeNode::Super(s) => {
                s.open_nodes = open;
                s.superedges = superedges.expect("built for supernode");
            }
        }
        pending.insert(id, records);
    }

    let residual = pending.remove(&tree.root).map(|r| r.len()).unwrap_or(0);
    if residual > 0 {
        return Err(TreeError::ResidualAtRoot { count: residual });
    }
    let staging = tree.store_dir.join(STAGING_DIR);
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(|e| TreeError::io(&staging, e))?;
    }
    tree.filled = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{assemble_tree, fixture};

    #[test]
    fn fixture_counts() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = assemble_tree(&fixture::graph(), &fixture::plan(), dir.path()).unwrap();
        let r = fill_graph_tree(&mut t).unwrap();
        assert_eq!(
            r,
            FillReport {
                internal_edges: 4,
                cross_edges: 4,
                residual_at_root: 0
            }
        );
        assert!(t.is_filled());
        assert!(!dir.path().join(STAGING_DIR).exists());
    }

    #[test]
    fn tampered_spill_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = assemble_tree(&fixture::graph(), &fixture::plan(), dir.path()).unwrap();
        // Drop one side of edge (4,5).
        fs::write(dir.path().join("staging/ext_5.tsv"), "X 6 7 1 6\n").unwrap();
        assert!(matches!(fill_graph_tree(&mut t), Err(TreeError::UnmatchedEdge { .. })));
    }
}
