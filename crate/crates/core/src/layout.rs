//! Deterministic 2D coordinates: a spring embedder for leaf subgraphs and
//! nested circles for the tree.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{Graph, NodeId};
use crate::tree::{GraphTree, LeafSubgraph, SuperNodeId};

pub const DEFAULT_ITERATIONS: usize = 300;

const STEP: f64 = 0.1;
const START_TEMPERATURE: f64 = 0.1;
/// Isolated nodes sit on this ring; everything else is fitted inside
/// `INNER_RADIUS`.
const RING_RADIUS: f64 = 0.48;
const INNER_RADIUS: f64 = 0.4;
const MARGIN: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafLayout {
    pub leaf: SuperNodeId,
    pub seed: u64,
    pub iterations: usize,
    /// One entry per member, inside the unit square.
    pub positions: BTreeMap<NodeId, Point>,
}

pub fn layout_leaf(sub: &LeafSubgraph, seed: u64, iterations: usize) -> LeafLayout {
    LeafLayout {
        leaf: sub.leaf,
        seed,
        iterations,
        positions: force_directed(&sub.graph, seed, iterations),
    }
}

/// Fruchterman-Reingold layout with natural length `sqrt(1/n)` over the
/// nodes that have edges, centered on `(0.5, 0.5)` and shrunk only when it
/// would leave the square. Isolated nodes are spaced evenly on a ring.
pub fn force_directed(g: &Graph, seed: u64, iterations: usize) -> BTreeMap<NodeId, Point> {
    let n = g.node_count();
    let mut out = BTreeMap::new();
    if n == 1 {
        out.insert(g.id_at(0), Point { x: 0.5, y: 0.5 });
        return out;
    }
    let connected: Vec<usize> = (0..n).filter(|&i| g.degree_dense(i) > 0).collect();
    let isolated: Vec<usize> = (0..n).filter(|&i| g.degree_dense(i) == 0).collect();

    let m = connected.len();
    let mut slot = vec![usize::MAX; n];
    for (s, &i) in connected.iter().enumerate() {
        slot[i] = s;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..m).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    if m > 0 {
        let k = (1.0 / m as f64).sqrt();
        let mut disp = vec![(0.0f64, 0.0f64); m];
        for it in 0..iterations {
            let temperature = START_TEMPERATURE * (1.0 - it as f64 / iterations as f64);
            disp.iter_mut().for_each(|d| *d = (0.0, 0.0));
            for a in 0..m {
                for b in a + 1..m {
                    let (dx, dy, d) = delta(pos[a], pos[b]);
                    let f = k * k / d;
                    disp[a].0 += dx / d * f;
                    disp[a].1 += dy / d * f;
                    disp[b].0 -= dx / d * f;
                    disp[b].1 -= dy / d * f;
                }
            }
            for e in g.edges() {
                let a = slot[g.index_of(e.source).unwrap()];
                let b = slot[g.index_of(e.target).unwrap()];
                let (dx, dy, d) = delta(pos[a], pos[b]);
                let f = d * d / k;
                disp[a].0 -= dx / d * f;
                disp[a].1 -= dy / d * f;
                disp[b].0 += dx / d * f;
                disp[b].1 += dy / d * f;
            }
            for (p, d) in pos.iter_mut().zip(&disp) {
                let len = (d.0 * d.0 + d.1 * d.1).sqrt();
                if len > 0.0 {
                    let step = (len * STEP).min(temperature);
                    p.0 += d.0 / len * step;
                    p.1 += d.1 / len * step;
                }
            }
        }
        fit(&mut pos, if isolated.is_empty() { 0.5 - MARGIN } else { INNER_RADIUS });
    }
    for (s, &i) in connected.iter().enumerate() {
        out.insert(g.id_at(i), Point { x: pos[s].0, y: pos[s].1 });
    }
    let r = if m == 0 && isolated.len() == 1 { 0.0 } else { RING_RADIUS };
    for (j, &i) in isolated.iter().enumerate() {
        let angle = 2.0 * PI * j as f64 / isolated.len() as f64;
        out.insert(
            g.id_at(i),
            Point {
                x: 0.5 + r * angle.cos(),
                y: 0.5 + r * angle.sin(),
            },
        );
    }
    out
}

/// Vector from `b` to `a` and its length, nudged off zero.
fn delta(a: (f64, f64), b: (f64, f64)) -> (f64, f64, f64) {
    let (mut dx, dy) = (a.0 - b.0, a.1 - b.1);
    let mut d = (dx * dx + dy * dy).sqrt();
    if d < 1e-9 {
        dx = 1e-9;
        d = 1e-9;
    }
    (dx, dy, d)
}

/// Center the bounding box on (0.5, 0.5) and shrink until every point is
/// within `radius` of the center in both coordinates (or in distance, when
/// a ring of isolated nodes needs room).
fn fit(pos: &mut [(f64, f64)], radius: f64) {
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in pos.iter() {
        lo_x = lo_x.min(p.0);
        hi_x = hi_x.max(p.0);
        lo_y = lo_y.min(p.1);
        hi_y = hi_y.max(p.1);
    }
    let (cx, cy) = ((lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0);
    let reach = pos
        .iter()
        .map(|p| ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt())
        .fold(0.0, f64::max);
    let scale = if reach > radius { radius / reach } else { 1.0 };
    for p in pos.iter_mut() {
        p.0 = 0.5 + (p.0 - cx) * scale;
        p.1 = 0.5 + (p.1 - cy) * scale;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyLayout {
    pub circles: BTreeMap<SuperNodeId, Circle>,
    pub level: BTreeMap<SuperNodeId, usize>,
}

/// Root fills the unit square's inscribed circle; children sit on a ring at
/// half the parent radius, each in an angular wedge proportional to the
/// square root of its closure size, with radii in the same proportion.
pub fn layout_hierarchy(tree: &GraphTree) -> HierarchyLayout {
    let mut circles = BTreeMap::new();
    let mut level = BTreeMap::new();
    let root = tree.root();
    circles.insert(root, Circle { x: 0.5, y: 0.5, r: 0.5 });
    let mut queue = VecDeque::from([root]);
    while let Some(id) = queue.pop_front() {
        let node = tree.node(id).expect("ids come from the tree");
        level.insert(id, node.depth());
        let parent = circles[&id];
        let children = node.children();
        if children.len() == 1 {
            circles.insert(
                children[0],
                Circle {
                    r: 0.9 * parent.r,
                    ..parent
                },
            );
        } else if !children.is_empty() {
            let weights: Vec<f64> = children
                .iter()
                .map(|&c| (tree.node(c).unwrap().closure_size().max(1) as f64).sqrt())
                .collect();
            let total: f64 = weights.iter().sum();
            let ring = parent.r / 2.0;
            let wedges: Vec<f64> = weights.iter().map(|w| 2.0 * PI * w / total).collect();
            let scale = wedges
                .iter()
                .zip(&weights)
                .map(|(a, w)| ring * (a.min(PI) / 2.0).sin() / w)
                .fold(f64::MAX, f64::min);
            let mut start = 0.0;
            for ((&c, w), a) in children.iter().zip(&weights).zip(&wedges) {
                let theta = start + a / 2.0;
                start += a;
                circles.insert(
                    c,
                    Circle {
                        x: parent.x + ring * theta.cos(),
                        y: parent.y + ring * theta.sin(),
                        r: 0.9 * scale * w,
                    },
                );
            }
        }
        queue.extend(children.iter().copied());
    }
    HierarchyLayout { circles, level }
}
