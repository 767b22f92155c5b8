mod common;

use std::collections::{BTreeMap, HashMap, VecDeque};

use proptest::prelude::*;

use common::*;
use supergraph::graph::{load_graph, read_edge_list, write_graph, write_labels, Graph, GraphBuilder, GraphError, NodeId};
use supergraph::metrics::{connected_components, degree_distribution, hops};

fn edges_strategy() -> impl Strategy<Value = Vec<(u64, u64, u8)>> {
    prop::collection::vec((0u64..60, 0u64..60, 1u8..5), 0..200)
}

fn from_triples(triples: &[(u64, u64, u8)]) -> Graph {
    let mut b = GraphBuilder::new();
    for &(a, c, w) in triples {
        if a != c {
            b.add_edge(NodeId(a), NodeId(c), w as f64).unwrap();
        }
    }
    b.build()
}

/// Plain BFS over an adjacency map built from the edge list.
fn bfs_hops(g: &Graph, a: NodeId, b: NodeId) -> Option<usize> {
    let mut adj: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    for e in g.edges() {
        adj.entry(e.source).or_default().push(e.target);
        adj.entry(e.target).or_default().push(e.source);
    }
    let mut dist = HashMap::from([(a, 0usize)]);
    let mut q = VecDeque::from([a]);
    while let Some(v) = q.pop_front() {
        if v == b {
            return Some(dist[&v]);
        }
        for &u in adj.get(&v).into_iter().flatten() {
            if !dist.contains_key(&u) {
                dist.insert(u, dist[&v] + 1);
                q.push_back(u);
            }
        }
    }
    None
}

proptest! {
    #[test]
    fn edge_list_round_trip(triples in edges_strategy()) {
        let g = from_triples(&triples);
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let mut b = GraphBuilder::new();
        read_edge_list(buf.as_slice(), &mut b).unwrap();
        let back = b.build();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn duplicate_pairs_merge_by_summing(triples in edges_strategy()) {
        let g = from_triples(&triples);
        let mut expected: BTreeMap<Key, f64> = BTreeMap::new();
        for &(a, c, w) in &triples {
            if a != c {
                *expected.entry(key(NodeId(a), NodeId(c))).or_default() += w as f64;
            }
        }
        let got: BTreeMap<Key, f64> = g.edges().iter().map(|e| (e.key(), e.weight)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn degrees_match_endpoint_recount(triples in edges_strategy()) {
        let g = from_triples(&triples);
        let recount = degree_recount(&g);
        for &v in g.nodes() {
            prop_assert_eq!(g.degree(v), Some(recount[&v]));
        }
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for d in recount.values() {
            *hist.entry(*d).or_default() += 1;
        }
        prop_assert_eq!(degree_distribution(&g), hist);
    }

    #[test]
    fn hops_match_bfs(triples in edges_strategy(), a in 0u64..60, b in 0u64..60) {
        let g = from_triples(&triples);
        let (a, b) = (NodeId(a), NodeId(b));
        if g.contains(a) && g.contains(b) {
            let expected = if a == b { Some(0) } else { bfs_hops(&g, a, b) };
            prop_assert_eq!(hops(&g, a, b).unwrap(), expected);
            let comps = connected_components(&g);
            prop_assert_eq!(comps.component(a) == comps.component(b), expected.is_some());
        }
    }
}

#[test]
fn load_reads_edges_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.tsv");
    let labels = dir.path().join("labels.tsv");
    std::fs::write(&edges, "# comment\n1\t2\n2\t3\t2.5\n\n").unwrap();
    std::fs::write(&labels, "1\tAda\n9\tIsolated One\n").unwrap();
    let g = load_graph(&edges, Some(&labels)).unwrap();
    assert_eq!(g.nodes(), ids(&[1, 2, 3, 9]).as_slice());
    assert_eq!(g.edge_count(), 2);
    assert_eq!(g.label(NodeId(9)), Some("Isolated One"));
    assert_eq!(g.degree(NodeId(9)), Some(0));
    let mut out = Vec::new();
    write_labels(&g, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "1\tAda\n9\tIsolated One\n");
}

#[test]
fn bad_input_names_the_line() {
    let mut b = GraphBuilder::new();
    let err = read_edge_list("1\t2\n3\t3\n".as_bytes(), &mut b).unwrap_err();
    assert!(matches!(err, GraphError::Loop { line: Some(2), .. }), "{err}");
    let err = read_edge_list("1\t2\t-1\n".as_bytes(), &mut GraphBuilder::new()).unwrap_err();
    assert!(matches!(err, GraphError::BadWeight { line: Some(1), .. }));
    let err = read_edge_list("1 2\n".as_bytes(), &mut GraphBuilder::new()).unwrap_err();
    assert!(matches!(err, GraphError::Malformed { line: 1, .. }));
    let err = load_graph(std::path::Path::new("/nonexistent/g.tsv"), None).unwrap_err();
    assert!(matches!(err, GraphError::Io { .. }));
}
