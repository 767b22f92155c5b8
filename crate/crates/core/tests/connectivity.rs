mod common;

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use common::*;
use supergraph::connectivity::{candidate_pairs, connectivity, external_neighbors, first_common_parent, QueryError};
use supergraph::graph::NodeId;
use supergraph::tree::SuperNodeId;

fn s(i: u32) -> SuperNodeId {
    SuperNodeId(i)
}

#[test]
fn fixture_meeting_points() {
    let dir = tempfile::tempdir().unwrap();
    let t = fixture_tree(dir.path());
    let mp = first_common_parent(&t, s(5), s(6)).unwrap();
    assert_eq!((mp.common_parent, mp.child_a, mp.child_b), (s(2), s(5), s(6)));
    let mp = first_common_parent(&t, s(3), s(5)).unwrap();
    assert_eq!((mp.common_parent, mp.child_a, mp.child_b), (s(0), s(1), s(2)));
    assert!(matches!(first_common_parent(&t, s(4), s(4)), Err(QueryError::SameNode(_))));
}

#[test]
fn fixture_connectivity_and_external() {
    let dir = tempfile::tempdir().unwrap();
    let t = fixture_tree(dir.path());
    let r = connectivity(&t, s(3), s(4)).unwrap();
    let keys: Vec<Key> = r.edges.iter().map(|e| e.key()).collect();
    assert_eq!(keys, vec![(NodeId(2), NodeId(3)), (NodeId(2), NodeId(4))]);
    assert_eq!(r.weight(), 2.0);

    let x = external_neighbors(&t, NodeId(2)).unwrap();
    let ns: Vec<u64> = x.entries.iter().map(|e| e.neighbor.0).collect();
    assert_eq!(ns, vec![3, 4]);
    assert!(x.entries.iter().all(|e| e.resolved_at == s(1)));

    let lonely = external_neighbors(&t, NodeId(1)).unwrap();
    assert!(lonely.entries.is_empty());
    assert_eq!(lonely.levels_walked, 0);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn connectivity_equals_brute_force_scan(n in 20usize..150, p in 0.02f64..0.2, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let dir = tempfile::tempdir().unwrap();
        let tree = build(&g, 3, 3, seed, dir.path());
        let closures = closures_by_ancestry(&tree);
        for (a, b) in disjoint_pairs(&tree) {
            let r = connectivity(&tree, a, b).unwrap();
            let got: Vec<Key> = r.edges.iter().map(|e| e.key()).collect();
            prop_assert_eq!(&got, &brute_connectivity(&g, &closures[&a], &closures[&b]));

            let pairs: BTreeSet<Key> = candidate_pairs(&tree, a, b).unwrap().into_iter().collect();
            prop_assert!(got.iter().all(|k| pairs.contains(k)));

            let back = connectivity(&tree, b, a).unwrap();
            prop_assert_eq!(&back.edges, &r.edges);
        }
    }

    #[test]
    fn external_entries_complete_the_adjacency(n in 20usize..150, p in 0.02f64..0.2, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let dir = tempfile::tempdir().unwrap();
        let tree = build(&g, 2, 4, seed, dir.path());
        let degree = degree_recount(&g);
        for &v in g.nodes() {
            let leaf = tree.leaf_of(v).unwrap();
            let sub = tree.expand_leaf(leaf).unwrap();
            let internal: BTreeSet<NodeId> = sub.graph.neighbors(v).unwrap().map(|(u, _)| u).collect();
            let x = external_neighbors(&tree, v).unwrap();
            let external: BTreeSet<NodeId> = x.entries.iter().map(|e| e.neighbor).collect();
            prop_assert!(internal.is_disjoint(&external));
            prop_assert_eq!(internal.len() + x.entries.len(), degree[&v]);
            let all: BTreeSet<NodeId> = internal.union(&external).copied().collect();
            let truth: BTreeSet<NodeId> = g.neighbors(v).unwrap().map(|(u, _)| u).collect();
            prop_assert_eq!(all, truth);
            for e in &x.entries {
                prop_assert_ne!(e.neighbor_leaf, leaf);
                prop_assert_eq!(tree.leaf_of(e.neighbor), Some(e.neighbor_leaf));
            }
        }
    }
}

#[test]
fn siblings_get_the_stored_superedge_verbatim() {
    let g = random_graph(120, 0.06, 4);
    let dir = tempfile::tempdir().unwrap();
    let tree = build(&g, 3, 3, 4, dir.path());
    for sn in tree.supernodes() {
        for (&(a, b), se) in &sn.superedges {
            let r = connectivity(&tree, a, b).unwrap();
            assert_eq!(r.edges, se.edges);
            assert_eq!(r.meeting_point.common_parent, sn.id);
        }
    }
}

#[test]
fn leaf_pair_weights_conserve_edges() {
    let g = random_graph(140, 0.05, 6);
    let dir = tempfile::tempdir().unwrap();
    let tree = build(&g, 3, 3, 6, dir.path());
    let leaves: Vec<SuperNodeId> = tree.leaves().map(|l| l.id).collect();
    let mut total = 0;
    for (i, &a) in leaves.iter().enumerate() {
        for &b in &leaves[i + 1..] {
            total += connectivity(&tree, a, b).unwrap().edges.len();
        }
        total += tree.expand_leaf(a).unwrap().graph.edge_count();
    }
    assert_eq!(total, g.edge_count());
}

#[test]
fn nested_pairs_are_rejected_both_ways() {
    let g = random_graph(60, 0.1, 2);
    let dir = tempfile::tempdir().unwrap();
    let tree = build(&g, 2, 3, 2, dir.path());
    let mut parents: HashMap<SuperNodeId, SuperNodeId> = HashMap::new();
    for n in tree.nodes() {
        if let Some(p) = n.parent() {
            parents.insert(n.id(), p);
        }
    }
    for (&child, &parent) in &parents {
        assert!(matches!(connectivity(&tree, parent, child), Err(QueryError::Nested { ancestor, .. }) if ancestor == parent));
        assert!(matches!(connectivity(&tree, child, parent), Err(QueryError::Nested { ancestor, .. }) if ancestor == parent));
    }
    assert!(matches!(external_neighbors(&tree, NodeId(10_000)), Err(QueryError::UnknownNode(_))));
}
