mod common;

use proptest::prelude::*;

use common::*;
use supergraph::engine::Engine;
use supergraph::layout::{force_directed, layout_hierarchy, Circle, DEFAULT_ITERATIONS};
use supergraph::tree::load_tree;

const TOL: f64 = 1e-9;

fn inside(child: &Circle, parent: &Circle) -> bool {
    let d = ((child.x - parent.x).powi(2) + (child.y - parent.y).powi(2)).sqrt();
    d + child.r <= parent.r + TOL
}

fn disjoint(a: &Circle, b: &Circle) -> bool {
    let d = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    d + TOL >= a.r + b.r
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn circles_nest_and_siblings_do_not_overlap(
        n in 10usize..200,
        k in 2usize..5,
        levels in 2usize..5,
        seed in any::<u64>(),
    ) {
        let g = random_graph(n, 0.05, seed);
        let dir = tempfile::tempdir().unwrap();
        let tree = build(&g, k, levels, seed, dir.path());
        let h = layout_hierarchy(&tree);
        prop_assert_eq!(h.circles.len(), tree.nodes().len());
        for node in tree.nodes() {
            let c = &h.circles[&node.id()];
            prop_assert!(c.r > 0.0);
            prop_assert_eq!(h.level[&node.id()], tree.path_from_root(node.id()).unwrap().len() - 1);
            let kids = node.children();
            for (i, a) in kids.iter().enumerate() {
                prop_assert!(inside(&h.circles[a], c), "{} escapes {}", a, node.id());
                for b in &kids[i + 1..] {
                    prop_assert!(disjoint(&h.circles[a], &h.circles[b]), "{} overlaps {}", a, b);
                }
            }
        }
    }
}

#[test]
fn leaf_layouts_are_deterministic_and_complete() {
    let g = random_graph(200, 0.04, 12);
    let dir = tempfile::tempdir().unwrap();
    build(&g, 3, 3, 12, dir.path());
    let engine = Engine::open(dir.path(), 4).unwrap();
    for leaf in engine.tree().leaves().map(|l| l.id).collect::<Vec<_>>() {
        engine.expand(leaf).unwrap();
        let a = engine.leaf_layout(leaf, 3, DEFAULT_ITERATIONS).unwrap();
        let members = &engine.tree().node(leaf).unwrap().as_leaf().unwrap().members;
        assert_eq!(a.positions.keys().copied().collect::<Vec<_>>(), *members);
        assert!(a.positions.values().all(|p| (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)));

        // A fresh computation from the leaf file agrees.
        let fresh = load_tree(dir.path(), 1).unwrap();
        let sub = fresh.expand_leaf(leaf).unwrap();
        assert_eq!(force_directed(&sub.graph, 3, DEFAULT_ITERATIONS), a.positions);
        engine.collapse(leaf).unwrap();
    }
}

#[test]
fn hierarchy_layout_is_stable_across_loads() {
    let dir = tempfile::tempdir().unwrap();
    let built = fixture_tree(dir.path());
    let loaded = load_tree(dir.path(), 2).unwrap();
    assert_eq!(layout_hierarchy(&built), layout_hierarchy(&loaded));
}
