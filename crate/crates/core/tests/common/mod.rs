//! Independent oracles for the integration tests. Nothing here calls the
//! code under test for the value it is checking.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use supergraph::graph::{Graph, NodeId};
use supergraph::partition::{HierarchyPlan, PlanNode};
use supergraph::pipeline::{build_store, BuildOptions};
use supergraph::tree::{GraphTree, SuperNodeId};

pub type Key = (NodeId, NodeId);

pub fn key(a: NodeId, b: NodeId) -> Key {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn ids(v: &[u64]) -> Vec<NodeId> {
    v.iter().map(|&x| NodeId(x)).collect()
}

/// The eight-node example graph and its hand-made plan.
pub fn fixture_graph() -> Graph {
    Graph::from_pairs([(1, 2), (3, 4), (5, 6), (7, 8), (2, 3), (2, 4), (6, 7), (4, 5)]).unwrap()
}

pub fn fixture_plan() -> HierarchyPlan {
    let text = "leaf 0.0.0 : 1,2\nleaf 0.0.1 : 3,4\nleaf 0.1.0 : 5,6\nleaf 0.1.1 : 7,8\n";
    HierarchyPlan::read_leaves(text.as_bytes()).unwrap()
}

pub fn fixture_tree(dir: &Path) -> GraphTree {
    let mut opts = BuildOptions::new(2, 3);
    opts.plan = Some(fixture_plan());
    build_store(&fixture_graph(), &opts, dir).unwrap().0
}

pub fn build(g: &Graph, k: usize, levels: usize, seed: u64, dir: &Path) -> GraphTree {
    let mut opts = BuildOptions::new(k, levels);
    opts.seed = seed;
    build_store(g, &opts, dir).unwrap().0
}

/// Closures from leaf membership pushed up parent pointers, one node at a
/// time.
pub fn closures_by_ancestry(tree: &GraphTree) -> HashMap<SuperNodeId, BTreeSet<NodeId>> {
    let mut out: HashMap<SuperNodeId, BTreeSet<NodeId>> = HashMap::new();
    for n in tree.nodes() {
        out.entry(n.id()).or_default();
    }
    for leaf in tree.leaves() {
        for &v in &leaf.members {
            let mut cur = Some(leaf.id);
            while let Some(id) = cur {
                out.get_mut(&id).unwrap().insert(v);
                cur = tree.node(id).unwrap().parent();
            }
        }
    }
    out
}

/// Every edge with one endpoint in `a` and the other in `b`, by full scan.
pub fn brute_connectivity(g: &Graph, a: &BTreeSet<NodeId>, b: &BTreeSet<NodeId>) -> Vec<Key> {
    let mut out: Vec<Key> = g
        .edges()
        .iter()
        .filter(|e| {
            (a.contains(&e.source) && b.contains(&e.target)) || (a.contains(&e.target) && b.contains(&e.source))
        })
        .map(|e| key(e.source, e.target))
        .collect();
    out.sort();
    out
}

/// Members of `closure` with a neighbor outside it, from the adjacency of G.
pub fn brute_open_nodes(g: &Graph, closure: &BTreeSet<NodeId>) -> Vec<NodeId> {
    let mut adj: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    for e in g.edges() {
        adj.entry(e.source).or_default().push(e.target);
        adj.entry(e.target).or_default().push(e.source);
    }
    closure
        .iter()
        .copied()
        .filter(|v| adj.get(v).is_some_and(|ns| ns.iter().any(|u| !closure.contains(u))))
        .collect()
}

/// Degree of every node by counting edge endpoints.
pub fn degree_recount(g: &Graph) -> HashMap<NodeId, usize> {
    let mut d: HashMap<NodeId, usize> = g.nodes().iter().map(|&v| (v, 0)).collect();
    for e in g.edges() {
        *d.get_mut(&e.source).unwrap() += 1;
        *d.get_mut(&e.target).unwrap() += 1;
    }
    d
}

/// Unordered pairs of tree nodes whose closures are disjoint.
pub fn disjoint_pairs(tree: &GraphTree) -> Vec<(SuperNodeId, SuperNodeId)> {
    let anc: HashMap<SuperNodeId, HashSet<SuperNodeId>> = tree
        .nodes()
        .iter()
        .map(|n| (n.id(), tree.path_from_root(n.id()).unwrap().into_iter().collect()))
        .collect();
    let mut out = Vec::new();
    for a in tree.nodes() {
        for b in tree.nodes() {
            let (a, b) = (a.id(), b.id());
            if a < b && !anc[&a].contains(&b) && !anc[&b].contains(&a) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Random graph for property suites: `n` nodes, density `p`, with every id
/// present.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    supergraph::synth::gnp(n, p, seed)
}

/// Check that a plan's children partition their parent at every level.
pub fn plan_partitions(node: &PlanNode) -> bool {
    if node.is_leaf() {
        return !node.members.is_empty();
    }
    let mut seen = BTreeSet::new();
    for c in &node.children {
        for v in &c.members {
            if !seen.insert(*v) {
                return false;
            }
        }
    }
    let parent: BTreeSet<NodeId> = node.members.iter().copied().collect();
    seen == parent && node.children.iter().all(plan_partitions)
}
