use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fs;
use std::path::Path;

use super::store::{self, leaf_rel_path, LEAVES_DIR, STAGING_DIR, SUPEREDGES_DIR};
use super::{
    GraphTree, LeafCache, LeafSuperNode, SuperNode, SuperNodeId, TreeError, TreeNode, DEFAULT_CACHE_LEAVES,
    CHECKSUMS_FILE, MANIFEST_FILE,
};
use crate::graph::{Edge, Graph, NodeId};
use crate::partition::{HierarchyPlan, PlanNode};

/// Plan node after normalization: children are all leaves or all inner.
enum Proto<'a> {
    Inner(Vec<Proto<'a>>),
    Leaf(&'a [NodeId]),
}

fn normalize(node: &PlanNode) -> Proto<'_> {
    if node.is_leaf() {
        return Proto::Leaf(&node.members);
    }
    let mixed = node.children.iter().any(PlanNode::is_leaf) && node.children.iter().any(|c| !c.is_leaf());
    Proto::Inner(
        node.children
            .iter()
            .map(|c| {
                if mixed && c.is_leaf() {
                    Proto::Inner(vec![Proto::Leaf(&c.members)])
                } else {
                    normalize(c)
                }
            })
            .collect(),
    )
}

fn check_plan(g: &Graph, plan: &HierarchyPlan) -> Result<(), TreeError> {
    fn walk(n: &PlanNode, path: &str) -> Result<(), TreeError> {
        if n.members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TreeError::PlanMismatch(format!("plan node {path}: members not sorted and distinct")));
        }
        if n.is_leaf() {
            if n.members.is_empty() {
                return Err(TreeError::PlanMismatch(format!("leaf {path} is empty")));
            }
            return Ok(());
        }
        let mut union: Vec<NodeId> = n.children.iter().flat_map(|c| c.members.iter().copied()).collect();
        union.sort_unstable();
        if union != n.members {
            return Err(TreeError::PlanMismatch(format!(
                "children of plan node {path} do not partition its members"
            )));
        }
        for (i, c) in n.children.iter().enumerate() {
            walk(c, &format!("{path}.{i}"))?;
        }
        Ok(())
    }
    if plan.root.members != g.nodes() {
        return Err(TreeError::PlanMismatch(format!(
            "plan covers {} nodes, graph has {}",
            plan.root.members.len(),
            g.node_count()
        )));
    }
    walk(&plan.root, "0")
}

pub(crate) fn compute_closure_sizes(nodes: &mut [TreeNode], root: SuperNodeId) {
    let mut order = Vec::with_capacity(nodes.len());
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        order.push(id);
        stack.extend_from_slice(nodes[id.0 as usize].children());
    }
    for &id in order.iter().rev() {
        let size: usize = nodes[id.0 as usize]
            .children()
            .iter()
            .map(|c| nodes[c.0 as usize].closure_size())
            .sum();
        if let TreeNode::Super(s) = &mut nodes[id.0 as usize] {
            s.closure_size = size;
        }
    }
}

/// Remove whatever a previous build left in `dir`.
pub(crate) fn clear_store(dir: &Path) -> Result<(), TreeError> {
    for sub in [LEAVES_DIR, SUPEREDGES_DIR, STAGING_DIR] {
        let p = dir.join(sub);
        if p.exists() {
            fs::remove_dir_all(&p).map_err(|e| TreeError::io(&p, e))?;
        }
    }
    for f in [MANIFEST_FILE, CHECKSUMS_FILE] {
        let p = dir.join(f);
        if p.exists() {
            fs::remove_file(&p).map_err(|e| TreeError::io(&p, e))?;
        }
    }
    Ok(())
}

/// Lay out the tree skeleton for `plan`, write one file per leaf with its
/// induced subgraph and spill every edge leaving a leaf to the staging area.
/// The returned tree is unfilled.
pub fn assemble_tree(g: &Graph, plan: &HierarchyPlan, store_dir: &Path) -> Result<GraphTree, TreeError> {
    check_plan(g, plan)?;
    let proto = match normalize(&plan.root) {
        leaf @ Proto::Leaf(_) => Proto::Inner(vec![leaf]),
        inner => inner,
    };

    // Breadth-first numbering keeps siblings consecutive.
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut queue: VecDeque<(&Proto, Option<SuperNodeId>, usize)> = VecDeque::new();
    queue.push_back((&proto, None, 0));
    let mut next_id = 1u32;
    while let Some((p, parent, depth)) = queue.pop_front() {
        let id = SuperNodeId(nodes.len() as u32);
        match p {
            Proto::Inner(children) => {
                let ids: Vec<SuperNodeId> = (0..children.len()).map(|i| SuperNodeId(next_id + i as u32)).collect();
                next_id += children.len() as u32;
                for c in children {
                    queue.push_back((c, Some(id), depth + 1));
                }
                nodes.push(TreeNode::Super(SuperNode {
                    id,
                    parent,
                    children: ids,
                    superedges: BTreeMap::new(),
                    open_nodes: Vec::new(),
                    depth,
                    closure_size: 0,
                }));
            }
            Proto::Leaf(members) => nodes.push(TreeNode::Leaf(LeafSuperNode {
                id,
                parent: parent.expect("leaf below root"),
                members: members.to_vec(),
                open_nodes: Vec::new(),
                leaf_file: store_dir.join(leaf_rel_path(id)),
                depth,
            })),
        }
    }
    let root = SuperNodeId(0);
    compute_closure_sizes(&mut nodes, root);

    let mut node_index = HashMap::with_capacity(g.node_count());
    for n in &nodes {
        if let TreeNode::Leaf(l) = n {
            for &v in &l.members {
                node_index.insert(v, l.id);
            }
        }
    }

    clear_store(store_dir)?;
    let leaves_dir = store_dir.join(LEAVES_DIR);
    fs::create_dir_all(&leaves_dir).map_err(|e| TreeError::io(&leaves_dir, e))?;
    let staging = store_dir.join(STAGING_DIR);
    fs::create_dir_all(&staging).map_err(|e| TreeError::io(&staging, e))?;

    let mut internal: HashMap<SuperNodeId, Vec<&Edge>> = HashMap::new();
    let mut spill: HashMap<SuperNodeId, Vec<(&Edge, NodeId)>> = HashMap::new();
    for e in g.edges() {
        let a = node_index[&e.source];
        let b = node_index[&e.target];
        if a == b {
            internal.entry(a).or_default().push(e);
        } else {
            spill.entry(a).or_default().push((e, e.source));
            spill.entry(b).or_default().push((e, e.target));
        }
    }
    for n in &nodes {
        let TreeNode::Leaf(l) = n else { continue };
        let edges = internal.remove(&l.id).unwrap_or_default();
        let text = store::render_leaf_file(&l.members, |v| g.label(v), edges.into_iter());
        fs::write(&l.leaf_file, text).map_err(|e| TreeError::io(&l.leaf_file, e))?;
        if let Some(records) = spill.remove(&l.id) {
            let path = store::spill_path(store_dir, l.id);
            fs::write(&path, store::render_spill(records.into_iter())).map_err(|e| TreeError::io(&path, e))?;
        }
    }

    let k = plan.max_fanout();
    Ok(GraphTree {
        root,
        nodes,
        node_index,
        store_dir: store_dir.to_path_buf(),
        k,
        levels: plan.depth(),
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        filled: false,
        cache: LeafCache::new(DEFAULT_CACHE_LEAVES),
        checksums: BTreeMap::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixture;

    #[test]
    fn fixture_numbering() {
        let dir = tempfile::tempdir().unwrap();
        let t = assemble_tree(&fixture::graph(), &fixture::plan(), dir.path()).unwrap();
        assert!(!t.is_filled());
        assert_eq!(t.nodes().len(), 7);
        let leaf_ids: Vec<u32> = t.leaves().map(|l| l.id.0).collect();
        assert_eq!(leaf_ids, vec![3, 4, 5, 6]);
        assert_eq!(t.leaf_of(NodeId(6)), Some(SuperNodeId(5)));
        assert_eq!(t.node(SuperNodeId(1)).unwrap().closure_size(), 4);
        assert_eq!(t.node(SuperNodeId(0)).unwrap().closure_size(), 8);
        let spill = fs::read_to_string(dir.path().join("staging/ext_4.tsv")).unwrap();
        assert_eq!(spill, "X 2 3 1 3\nX 2 4 1 4\nX 4 5 1 4\n");
    }

    #[test]
    fn mixed_children_are_wrapped() {
        let g = Graph::from_pairs([(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let ids = |v: &[u64]| v.iter().map(|&x| NodeId(x)).collect::<Vec<_>>();
        let inner = PlanNode {
            members: ids(&[3, 4, 5]),
            children: vec![PlanNode::leaf(ids(&[3])), PlanNode::leaf(ids(&[4, 5]))],
        };
        let plan = HierarchyPlan {
            root: PlanNode {
                members: ids(&[1, 2, 3, 4, 5]),
                children: vec![PlanNode::leaf(ids(&[1, 2])), inner],
            },
        };
        let dir = tempfile::tempdir().unwrap();
        let t = assemble_tree(&g, &plan, dir.path()).unwrap();
        for sn in t.supernodes() {
            let leafs = sn.children.iter().filter(|c| t.node(**c).unwrap().is_leaf()).count();
            assert!(leafs == 0 || leafs == sn.children.len());
        }
        assert_eq!(t.leaf_count(), 3);
    }

    #[test]
    fn single_leaf_plan_gets_a_root() {
        let g = Graph::from_pairs([(1, 2)]).unwrap();
        let plan = HierarchyPlan {
            root: PlanNode::leaf(vec![NodeId(1), NodeId(2)]),
        };
        let dir = tempfile::tempdir().unwrap();
        let t = assemble_tree(&g, &plan, dir.path()).unwrap();
        assert!(!t.node(t.root()).unwrap().is_leaf());
        assert_eq!(t.leaf_count(), 1);
    }

    #[test]
    fn rejects_plans_not_covering_the_graph() {
        let g = Graph::from_pairs([(1, 2), (2, 3)]).unwrap();
        let plan = HierarchyPlan {
            root: PlanNode::leaf(vec![NodeId(1), NodeId(2)]),
        };
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(assemble_tree(&g, &plan, dir.path()), Err(TreeError::PlanMismatch(_))));

        let bad = HierarchyPlan {
            root: PlanNode {
                members: vec![NodeId(1), NodeId(2), NodeId(3)],
                children: vec![PlanNode::leaf(vec![NodeId(1), NodeId(2)]), PlanNode::leaf(vec![NodeId(2), NodeId(3)])],
            },
        };
        assert!(matches!(assemble_tree(&g, &bad, dir.path()), Err(TreeError::PlanMismatch(_))));
    }
}
