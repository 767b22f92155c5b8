//! Initial bisection of the coarsest graph.

use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::csr::Csr;
use super::refine::{fm_refine, side_weight, Bounds};

const INITIAL_PASSES: usize = 8;

/// Best of `trials` greedy graph-growing bisections, plus a component
/// packing when the graph is disconnected, each refined with FM. Ranked by
/// balance violation, then cut.
pub(crate) fn initial_bisection<R: Rng>(
    g: &Csr,
    bounds: Bounds,
    target0: u64,
    trials: usize,
    rng: &mut R,
) -> Vec<u32> {
    let mut best: Option<(u64, f64, Vec<u32>)> = None;
    let mut consider = |part: Vec<u32>| {
        let key = (bounds.violation(side_weight(g, &part)), g.cut(&part));
        let take = match &best {
            None => true,
            Some((v, c, _)) => key.0 < *v || (key.0 == *v && key.1 < *c - 1e-9),
        };
        if take {
            best = Some((key.0, key.1, part));
        }
    };

    if let Some(mut part) = pack_components(g, bounds, target0) {
        fm_refine(g, &mut part, bounds, INITIAL_PASSES);
        consider(part);
    }
    for _ in 0..trials.max(1) {
        let mut part = grow(g, bounds, target0, rng);
        fm_refine(g, &mut part, bounds, INITIAL_PASSES);
        consider(part);
    }
    best.map(|(_, _, p)| p).unwrap_or_else(|| vec![1; g.n()])
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Frontier {
    // Scaled gain keeps the heap on integers; ties break on lower index.
    gain: i64,
    rev_v: std::cmp::Reverse<u32>,
    stamp: u32,
}

/// Greedy graph growing: start from a random vertex and absorb the frontier
/// vertex with the best cut gain until side 0 reaches `target0`.
fn grow<R: Rng>(g: &Csr, bounds: Bounds, target0: u64, rng: &mut R) -> Vec<u32> {
    let n = g.n();
    let mut part = vec![1u32; n];
    if n == 0 {
        return part;
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut next_seed = 0usize;
    let degree: Vec<f64> = (0..n).map(|v| g.neighbors(v).map(|(_, w)| w).sum()).collect();
    let mut to_side0 = vec![0.0f64; n];
    let mut stamp = vec![0u32; n];
    let mut skipped = vec![false; n];
    let mut heap = BinaryHeap::new();
    let scale = |x: f64| (x * 1e6).round() as i64;
    let mut w0 = 0u64;

    while w0 < target0 {
        let v = loop {
            match heap.pop() {
                Some(Frontier { rev_v, stamp: s, .. }) => {
                    let v = rev_v.0 as usize;
                    if part[v] == 1 && !skipped[v] && s == stamp[v] {
                        break Some(v);
                    }
                }
                None => {
                    while next_seed < n && (part[order[next_seed] as usize] == 0 || skipped[order[next_seed] as usize]) {
                        next_seed += 1;
                    }
                    break (next_seed < n).then(|| order[next_seed] as usize);
                }
            }
        };
        let Some(v) = v else { break };
        let vw = g.vwgt[v] as u64;
        if w0 + vw > bounds.max0 {
            skipped[v] = true;
            continue;
        }
        part[v] = 0;
        w0 += vw;
        for (u, w) in g.neighbors(v) {
            if part[u] == 1 && !skipped[u] {
                to_side0[u] += w;
                stamp[u] += 1;
                heap.push(Frontier {
                    gain: scale(2.0 * to_side0[u] - degree[u]),
                    rev_v: std::cmp::Reverse(u as u32),
                    stamp: stamp[u],
                });
            }
        }
    }
    part
}

/// Bin-pack whole components onto side 0, largest first. `None` when the
/// graph is connected.
fn pack_components(g: &Csr, bounds: Bounds, target0: u64) -> Option<Vec<u32>> {
    let n = g.n();
    let mut comp = vec![u32::MAX; n];
    let mut weights: Vec<(u64, u32)> = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        let c = weights.len() as u32;
        comp[s] = c;
        stack.push(s);
        let mut w = 0u64;
        while let Some(v) = stack.pop() {
            w += g.vwgt[v] as u64;
            for (u, _) in g.neighbors(v) {
                if comp[u] == u32::MAX {
                    comp[u] = c;
                    stack.push(u);
                }
            }
        }
        weights.push((w, c));
    }
    if weights.len() < 2 {
        return None;
    }
    weights.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut side = vec![1u32; weights.len()];
    let mut w0 = 0u64;
    for &(w, c) in &weights {
        if w0 < target0 && w0 + w <= bounds.max0 {
            side[c as usize] = 0;
            w0 += w;
        }
    }
    Some(comp.iter().map(|&c| side[c as usize]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn disconnected_triangles_split_with_zero_cut() {
        let g = Graph::from_pairs([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        let csr = Csr::from_graph(&g, true);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let part = initial_bisection(&csr, Bounds { min0: 3, max0: 3 }, 3, 4, &mut rng);
        assert_eq!(csr.cut(&part), 0.0);
        assert_eq!(side_weight(&csr, &part), 3);
    }

    #[test]
    fn growing_respects_upper_bound() {
        let csr = Csr::from_graph(&crate::synth::gnm(50, 150, 3), true);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let part = grow(&csr, Bounds { min0: 20, max0: 27 }, 25, &mut rng);
        let w0 = side_weight(&csr, &part);
        assert!((25..=27).contains(&w0));
    }
}
