//! Per-subgraph metrics: degree distribution, connected components, hops.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub degree_histogram: BTreeMap<usize, usize>,
    pub component_count: usize,
    /// Ascending.
    pub component_sizes: Vec<usize>,
    /// Double-sweep lower bound on the diameter of the largest component.
    pub diameter_sample: Option<usize>,
}

/// Histogram `degree -> node count`; isolated nodes count at degree 0.
pub fn degree_distribution(g: &Graph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for i in 0..g.node_count() {
        *hist.entry(g.degree_dense(i)).or_insert(0) += 1;
    }
    hist
}

#[derive(Debug, Clone)]
pub struct Components {
    nodes: Vec<NodeId>,
    component_of: Vec<usize>,
    sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Component id of `v`. Ids are assigned in ascending order of each
    /// component's smallest node id.
    pub fn component(&self, v: NodeId) -> Option<usize> {
        self.nodes
            .binary_search(&v)
            .ok()
            .map(|i| self.component_of[i])
    }

    /// Size of each component, indexed by component id.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s
    }
}

pub fn connected_components(g: &Graph) -> Components {
    let n = g.node_count();
    let mut component_of = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        component_of[start] = c;
        queue.push_back(start);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for (w, _) in g.neighbors_dense(u) {
                if component_of[w] == usize::MAX {
                    component_of[w] = c;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    Components {
        nodes: g.nodes().to_vec(),
        component_of,
        sizes,
    }
}

fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for (w, _) in g.neighbors_dense(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Unweighted shortest-path length between `a` and `b`; `None` when they are
/// disconnected.
pub fn hops(g: &Graph, a: NodeId, b: NodeId) -> Result<Option<usize>, GraphError> {
    let ia = g.index_of(a).ok_or(GraphError::UnknownNode(a))?;
    let ib = g.index_of(b).ok_or(GraphError::UnknownNode(b))?;
    if ia == ib {
        return Ok(Some(0));
    }
    let d = bfs_distances(g, ia)[ib];
    Ok((d != usize::MAX).then_some(d))
}

pub fn metrics(g: &Graph) -> MetricsReport {
    let comps = connected_components(g);
    let diameter_sample = largest_component_start(&comps).map(|start| {
        let i = g.index_of(start).expect("component node in graph");
        let first = bfs_distances(g, i);
        let (far, _) = farthest(&first);
        let (_, ecc) = farthest(&bfs_distances(g, far));
        ecc
    });
    MetricsReport {
        degree_histogram: degree_distribution(g),
        component_count: comps.count(),
        component_sizes: comps.sorted_sizes(),
        diameter_sample,
    }
}

fn largest_component_start(c: &Components) -> Option<NodeId> {
    let (best, _) = c
        .sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
    c.component_of
        .iter()
        .position(|&x| x == best)
        .map(|i| c.nodes[i])
}

fn farthest(dist: &[usize]) -> (usize, usize) {
    dist.iter()
        .enumerate()
        .filter(|(_, &d)| d != usize::MAX)
        .fold((0, 0), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn empty_graph() {
        let g = GraphBuilder::new().build();
        assert!(degree_distribution(&g).is_empty());
        let m = metrics(&g);
        assert_eq!(m.component_count, 0);
        assert_eq!(m.diameter_sample, None);
    }

    #[test]
    fn triangle_histogram() {
        let g = Graph::from_pairs([(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(degree_distribution(&g), BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn two_triangles() {
        let g = Graph::from_pairs([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.count(), 2);
        assert_eq!(c.sorted_sizes(), vec![3, 3]);
        assert_eq!(c.component(NodeId(1)), Some(0));
        assert_eq!(c.component(NodeId(6)), Some(1));
        assert_eq!(hops(&g, NodeId(1), NodeId(5)).unwrap(), None);
    }

    #[test]
    fn path_hops() {
        let g = Graph::from_pairs([(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(connected_components(&g).count(), 1);
        assert_eq!(hops(&g, NodeId(1), NodeId(4)).unwrap(), Some(3));
        assert_eq!(hops(&g, NodeId(3), NodeId(3)).unwrap(), Some(0));
        assert!(hops(&g, NodeId(1), NodeId(42)).is_err());
        assert_eq!(metrics(&g).diameter_sample, Some(4));
    }

    #[test]
    fn isolated_nodes_at_degree_zero() {
        let mut b = GraphBuilder::new();
        b.add_edge(NodeId(1), NodeId(2), 1.0).unwrap();
        b.add_node(NodeId(7));
        let g = b.build();
        assert_eq!(degree_distribution(&g), BTreeMap::from([(0, 1), (1, 2)]));
        let m = metrics(&g);
        assert_eq!(m.component_sizes, vec![1, 2]);
    }
}
