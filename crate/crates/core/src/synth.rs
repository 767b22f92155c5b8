//! Seeded synthetic graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder, NodeId};

fn pair(a: u64, b: u64) -> (u64, u64) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Erdős–Rényi G(n, p) over ids `1..=n`. Every id is present even if isolated.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    for i in 1..=n as u64 {
        b.add_node(NodeId(i));
    }
    for i in 1..=n as u64 {
        for j in i + 1..=n as u64 {
            if rng.gen_bool(p) {
                b.add_edge(NodeId(i), NodeId(j), 1.0).expect("distinct endpoints");
            }
        }
    }
    b.build()
}

/// Uniform random graph with exactly `m` distinct edges over ids `1..=n`.
pub fn gnm(n: usize, m: usize, seed: u64) -> Graph {
    assert!(n >= 2 || m == 0, "need at least two nodes for an edge");
    assert!(m <= n * (n - 1) / 2, "too many edges for {n} nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut b = GraphBuilder::new();
    for i in 1..=n as u64 {
        b.add_node(NodeId(i));
    }
    while seen.len() < m {
        let a = rng.gen_range(1..=n as u64);
        let c = rng.gen_range(1..=n as u64);
        if a != c && seen.insert(pair(a, c)) {
            b.add_edge(NodeId(a), NodeId(c), 1.0).expect("distinct endpoints");
        }
    }
    b.build()
}

/// Planted-partition graph. Community `c` holds a contiguous id block of
/// `sizes[c]` nodes (ids start at 1). Returns the graph and the community of
/// each node in ascending id order.
pub fn planted_partition(sizes: &[usize], p_in: f64, p_out: f64, seed: u64) -> (Graph, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let community: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let n = community.len();
    let mut b = GraphBuilder::new();
    for i in 1..=n as u64 {
        b.add_node(NodeId(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let p = if community[i] == community[j] { p_in } else { p_out };
            if rng.gen_bool(p) {
                b.add_edge(NodeId(i as u64 + 1), NodeId(j as u64 + 1), 1.0)
                    .expect("distinct endpoints");
            }
        }
    }
    (b.build(), community)
}

/// Community-structured graph with exactly `n` nodes and `m` edges.
///
/// Nodes `1..=n` are split into `communities` near-equal blocks; each block
/// gets a random spanning chain, and the remaining edges land inside a block
/// with probability `intra_fraction` and between blocks otherwise.
pub fn community_graph(n: usize, m: usize, communities: usize, intra_fraction: f64, seed: u64) -> Graph {
    assert!(communities >= 1 && communities <= n);
    assert!(m >= n - communities, "need at least n - communities edges");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks: Vec<(u64, u64)> = (0..communities)
        .map(|c| {
            let lo = (c * n / communities) as u64 + 1;
            let hi = ((c + 1) * n / communities) as u64;
            (lo, hi)
        })
        .collect();
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    for &(lo, hi) in &blocks {
        let mut members: Vec<u64> = (lo..=hi).collect();
        members.shuffle(&mut rng);
        for w in members.windows(2) {
            let e = pair(w[0], w[1]);
            seen.insert(e);
            edges.push(e);
        }
    }
    while edges.len() < m {
        let (a, c) = if rng.gen_bool(intra_fraction) {
            let (lo, hi) = blocks[rng.gen_range(0..communities)];
            if lo == hi {
                continue;
            }
            (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
        } else {
            (rng.gen_range(1..=n as u64), rng.gen_range(1..=n as u64))
        };
        if a == c {
            continue;
        }
        let e = pair(a, c);
        if seen.insert(e) {
            edges.push(e);
        }
    }
    let mut b = GraphBuilder::new();
    for i in 1..=n as u64 {
        b.add_node(NodeId(i));
    }
    for (a, c) in edges {
        b.add_edge(NodeId(a), NodeId(c), 1.0).expect("distinct endpoints");
    }
    b.build()
}
