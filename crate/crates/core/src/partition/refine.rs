//! Boundary Fiduccia–Mattheyses refinement for a two-way split.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::csr::Csr;

/// Allowed total vertex weight on side 0. Side 1 holds the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Bounds {
    pub min0: u64,
    pub max0: u64,
}

impl Bounds {
    pub fn violation(&self, w0: u64) -> u64 {
        self.min0.saturating_sub(w0) + w0.saturating_sub(self.max0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    gain: f64,
    v: u32,
    stamp: u32,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // Max-heap on gain; lower vertex index wins ties.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.v.cmp(&self.v))
            .then_with(|| self.stamp.cmp(&other.stamp))
    }
}

const EPS: f64 = 1e-9;

/// `(violation, cut)` ordering: balance first, then cut.
fn better(a: (u64, f64), b: (u64, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1 - EPS)
}

pub(crate) fn side_weight(g: &Csr, part: &[u32]) -> u64 {
    part.iter()
        .zip(&g.vwgt)
        .filter(|(&p, _)| p == 0)
        .map(|(_, &w)| w as u64)
        .sum()
}

/// Run FM passes until a pass makes no progress or `max_passes` is hit.
pub(crate) fn fm_refine(g: &Csr, part: &mut [u32], bounds: Bounds, max_passes: usize) {
    for _ in 0..max_passes {
        if !fm_pass(g, part, bounds) {
            break;
        }
    }
}

/// Move single vertices off the overweight side, best gain first, until the
/// split satisfies `bounds`. Only needed when FM could not get there.
pub(crate) fn force_balance(g: &Csr, part: &mut [u32], bounds: Bounds) {
    let mut w0 = side_weight(g, part);
    while bounds.violation(w0) > 0 {
        let from = if w0 > bounds.max0 { 0 } else { 1 };
        let current = bounds.violation(w0);
        let best = (0..g.n())
            .filter(|&v| part[v] == from)
            .filter(|&v| {
                let vw = g.vwgt[v] as u64;
                let next = if from == 0 { w0 - vw } else { w0 + vw };
                bounds.violation(next) < current
            })
            .map(|v| {
                let gain: f64 = g
                    .neighbors(v)
                    .map(|(u, w)| if part[u] == from { -w } else { w })
                    .sum();
                (v, gain)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        let Some((v, _)) = best else { break };
        part[v] = 1 - from;
        let vw = g.vwgt[v] as u64;
        w0 = if from == 0 { w0 - vw } else { w0 + vw };
    }
}

fn fm_pass(g: &Csr, part: &mut [u32], bounds: Bounds) -> bool {
    let n = g.n();
    if n < 2 {
        return false;
    }
    let mut internal = vec![0.0f64; n];
    let mut external = vec![0.0f64; n];
    for v in 0..n {
        for (u, w) in g.neighbors(v) {
            if part[u] == part[v] {
                internal[v] += w;
            } else {
                external[v] += w;
            }
        }
    }
    let mut w0 = side_weight(g, part);
    let mut cut: f64 = external.iter().sum::<f64>() / 2.0;
    // While out of balance every vertex is a candidate, not just the boundary.
    let all_vertices = bounds.violation(w0) > 0;

    let mut heaps: [BinaryHeap<Entry>; 2] = [BinaryHeap::new(), BinaryHeap::new()];
    let mut stamp = vec![0u32; n];
    let mut locked = vec![false; n];
    for v in 0..n {
        if all_vertices || external[v] > 0.0 {
            heaps[part[v] as usize].push(Entry {
                gain: external[v] - internal[v],
                v: v as u32,
                stamp: 0,
            });
        }
    }

    // A pass may wander up to one vertex weight outside the bounds; only the
    // best prefix is kept.
    let slack = g.vwgt.iter().copied().max().unwrap_or(1) as u64;
    let limit = (n / 20).clamp(25, 200);
    let mut moves: Vec<u32> = Vec::new();
    let mut best = (bounds.violation(w0), cut);
    let mut best_len = 0;
    let mut stale = 0;

    loop {
        let current_violation = bounds.violation(w0);
        let mut candidates: [Option<Entry>; 2] = [None, None];
        for side in 0..2 {
            while let Some(top) = heaps[side].peek().copied() {
                let v = top.v as usize;
                if locked[v] || top.stamp != stamp[v] || part[v] as usize != side {
                    heaps[side].pop();
                    continue;
                }
                let vw = g.vwgt[v] as u64;
                let next_w0 = if side == 0 { w0 - vw } else { w0 + vw };
                let next_violation = bounds.violation(next_w0);
                if next_violation <= current_violation.max(slack) {
                    candidates[side] = Some(top);
                    break;
                }
                heaps[side].pop();
            }
        }
        let side = match (candidates[0], candidates[1]) {
            (None, None) => break,
            (Some(_), None) => 0,
            (None, Some(_)) => 1,
            (Some(a), Some(b)) => match a.gain.total_cmp(&b.gain) {
                Ordering::Greater => 0,
                Ordering::Less => 1,
                // Tie: move out of the side further above its lower bound.
                Ordering::Equal => {
                    if w0.saturating_sub(bounds.min0) >= bounds.max0.saturating_sub(w0) {
                        0
                    } else {
                        1
                    }
                }
            },
        };
        let entry = heaps[side].pop().expect("candidate present");
        let v = entry.v as usize;
        let to = 1 - side as u32;
        part[v] = to;
        let vw = g.vwgt[v] as u64;
        if side == 0 {
            w0 -= vw;
        } else {
            w0 += vw;
        }
        cut -= entry.gain;
        locked[v] = true;
        std::mem::swap(&mut internal[v], &mut external[v]);
        moves.push(v as u32);
        for (u, w) in g.neighbors(v) {
            if part[u] == to {
                internal[u] += w;
                external[u] -= w;
            } else {
                internal[u] -= w;
                external[u] += w;
            }
            if !locked[u] {
                stamp[u] += 1;
                if all_vertices || external[u] > EPS {
                    heaps[part[u] as usize].push(Entry {
                        gain: external[u] - internal[u],
                        v: u as u32,
                        stamp: stamp[u],
                    });
                }
            }
        }

        let state = (bounds.violation(w0), cut);
        if better(state, best) {
            best = state;
            best_len = moves.len();
            stale = 0;
        } else {
            stale += 1;
            if stale > limit {
                break;
            }
        }
    }

    for &v in moves[best_len..].iter().rev() {
        part[v as usize] = 1 - part[v as usize];
    }
    best_len > 0
}
