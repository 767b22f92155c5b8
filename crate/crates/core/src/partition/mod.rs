//! Balanced k-way min-edge-cut partitioning and recursive hierarchies.
//!
//! The k-way split is a multilevel recursive bisection: heavy-edge matching
//! coarsening, greedy graph-growing initial bisection, and boundary FM
//! refinement while projecting back. Part sizes never exceed
//! `⌈(1+ε)·n/k⌉` and no part is left empty.

mod coarsen;
mod csr;
mod hierarchy;
mod initial;
mod kway;
mod refine;

use thiserror::Error;

use crate::graph::{Graph, NodeId};

pub use hierarchy::{build_hierarchy, HierarchyPlan, HierarchySpec, PlanNode};

pub(crate) use csr::Csr;
pub(crate) use kway::{balance_cap, derive_seed, recursive_bisection};

pub const DEFAULT_EPSILON: f64 = 0.10;

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("hierarchy needs at least one level, got {0}")]
    InvalidLevels(usize),
    #[error("epsilon must lie in [0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("cannot split {nodes} nodes into {k} parts")]
    TooFewNodes { nodes: usize, k: usize },
    #[error("balance unsatisfiable; smallest feasible epsilon is {min_epsilon}")]
    Infeasible { min_epsilon: f64 },
    #[error("plan node {path}: {source}")]
    AtPlanNode {
        path: String,
        #[source]
        source: Box<PartitionError>,
    },
    #[error("plan line {line}: {reason}")]
    PlanSyntax { line: usize, reason: String },
}

/// Result of one k-way split.
#[derive(Debug, Clone)]
pub struct PartitionAssignment {
    pub k: usize,
    pub cut_weight: f64,
    /// Admissible part size `⌈(1+ε)·n/k⌉`.
    pub cap: usize,
    nodes: Vec<NodeId>,
    parts: Vec<u32>,
}

impl PartitionAssignment {
    pub fn part_of(&self, v: NodeId) -> Option<usize> {
        self.nodes
            .binary_search(&v)
            .ok()
            .map(|i| self.parts[i] as usize)
    }

    /// `(node, part)` pairs in ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        self.nodes
            .iter()
            .zip(&self.parts)
            .map(|(&v, &p)| (v, p as usize))
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &p in &self.parts {
            sizes[p as usize] += 1;
        }
        sizes
    }

    pub fn members(&self, part: usize) -> Vec<NodeId> {
        self.iter()
            .filter(|&(_, p)| p == part)
            .map(|(v, _)| v)
            .collect()
    }

    /// Largest part relative to the perfectly even size `n/k`.
    pub fn balance(&self) -> f64 {
        let max = self.part_sizes().into_iter().max().unwrap_or(0);
        max as f64 * self.k as f64 / self.nodes.len().max(1) as f64
    }
}

pub(crate) fn validate(k: usize, epsilon: f64) -> Result<(), PartitionError> {
    if k < 2 {
        return Err(PartitionError::InvalidK(k));
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(PartitionError::InvalidEpsilon(epsilon));
    }
    Ok(())
}

/// Split `g` into `k` balanced parts minimizing the weighted edge cut.
pub fn kway_partition(g: &Graph, k: usize, epsilon: f64, seed: u64) -> Result<PartitionAssignment, PartitionError> {
    kway_partition_with(g, k, epsilon, seed, true)
}

/// As [`kway_partition`]; `weighted = false` counts every edge as 1.
pub fn kway_partition_with(
    g: &Graph,
    k: usize,
    epsilon: f64,
    seed: u64,
    weighted: bool,
) -> Result<PartitionAssignment, PartitionError> {
    validate(k, epsilon)?;
    let n = g.node_count();
    if n < k {
        return Err(PartitionError::TooFewNodes { nodes: n, k });
    }
    let cap = balance_cap(n as u64, k, epsilon);
    if cap * (k as u64) < n as u64 {
        let min_epsilon = (n.div_ceil(k) * k) as f64 / n as f64 - 1.0;
        return Err(PartitionError::Infeasible { min_epsilon });
    }
    let csr = Csr::from_graph(g, weighted);
    let parts = recursive_bisection(&csr, k, cap, seed);
    // The reported cut always uses real weights.
    let cut_weight = g
        .edges()
        .iter()
        .filter(|e| parts[g.index_of(e.source).unwrap()] != parts[g.index_of(e.target).unwrap()])
        .map(|e| e.weight)
        .sum();
    Ok(PartitionAssignment {
        k,
        cut_weight,
        cap: cap as usize,
        nodes: g.nodes().to_vec(),
        parts,
    })
}
