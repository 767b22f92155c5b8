//! Graph to saved, audited store.

use std::path::Path;
use std::time::Instant;

use log::info;
use serde::Serialize;

use crate::audit::{audit_store, AuditOptions, AuditReport};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{build_hierarchy, HierarchyPlan, HierarchySpec, DEFAULT_EPSILON};
use crate::tree::{assemble_tree, fill_graph_tree, save_tree, FillReport, GraphTree};

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub k: usize,
    pub levels: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Defaults to `2k`.
    pub min_leaf_size: Option<usize>,
    pub weighted_cut: bool,
    /// Use this hierarchy instead of partitioning.
    pub plan: Option<HierarchyPlan>,
}

impl BuildOptions {
    pub fn new(k: usize, levels: usize) -> Self {
        BuildOptions {
            k,
            levels,
            epsilon: DEFAULT_EPSILON,
            seed: 0,
            min_leaf_size: None,
            weighted_cut: true,
            plan: None,
        }
    }

    pub fn spec(&self) -> HierarchySpec {
        let mut spec = HierarchySpec::new(self.k, self.levels);
        spec.epsilon = self.epsilon;
        spec.weighted_cut = self.weighted_cut;
        if let Some(m) = self.min_leaf_size {
            spec.min_leaf_size = m;
        }
        spec
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildReport {
    pub nodes: usize,
    pub edges: usize,
    pub leaves: usize,
    pub supernodes: usize,
    pub fill: FillReport,
    pub audit: AuditReport,
    pub partition_secs: f64,
    pub assemble_secs: f64,
    pub fill_secs: f64,
    pub save_secs: f64,
    pub audit_secs: f64,
}

/// Partition (unless a plan is supplied), assemble, fill, save and audit.
/// Anything already in `out` from an earlier build is replaced. A failed
/// audit is an error.
pub fn build_store(g: &Graph, opts: &BuildOptions, out: &Path) -> Result<(GraphTree, BuildReport)> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let t = Instant::now();
    let plan = match &opts.plan {
        Some(p) => p.clone(),
        None => build_hierarchy(g, &opts.spec(), opts.seed)?,
    };
    let partition_secs = t.elapsed().as_secs_f64();
    info!("partitioned {} nodes into {} leaves in {partition_secs:.2}s", g.node_count(), plan.leaves().len());

    let t = Instant::now();
    let mut tree = assemble_tree(g, &plan, out)?;
    let assemble_secs = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let fill = fill_graph_tree(&mut tree)?;
    let fill_secs = t.elapsed().as_secs_f64();
    info!("filled: {} internal, {} cross edges", fill.internal_edges, fill.cross_edges);

    let t = Instant::now();
    save_tree(&tree)?;
    let save_secs = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let epsilon = opts.plan.is_none().then_some(opts.epsilon);
    let audit = audit_store(out, &AuditOptions { graph: Some(g), epsilon })?;
    let audit_secs = t.elapsed().as_secs_f64();
    if !audit.passed() {
        return Err(Error::AuditFailed(audit.to_string()));
    }

    let report = BuildReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        leaves: tree.leaf_count(),
        supernodes: tree.nodes().len() - tree.leaf_count(),
        fill,
        audit,
        partition_secs,
        assemble_secs,
        fill_secs,
        save_secs,
        audit_secs,
    };
    Ok((tree, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn builds_and_audits_a_random_graph() {
        let g = synth::gnm(200, 800, 11);
        let dir = tempfile::tempdir().unwrap();
        let (tree, report) = build_store(&g, &BuildOptions::new(3, 3), dir.path()).unwrap();
        assert!(report.audit.passed());
        assert_eq!(report.fill.internal_edges + report.fill.cross_edges, 800);
        assert!(tree.leaf_count() <= 9);
    }

    #[test]
    fn rebuild_replaces_previous_store() {
        let dir = tempfile::tempdir().unwrap();
        build_store(&synth::gnm(100, 300, 1), &BuildOptions::new(3, 3), dir.path()).unwrap();
        let (_, r) = build_store(&synth::gnm(30, 60, 2), &BuildOptions::new(2, 2), dir.path()).unwrap();
        assert!(r.audit.passed());
        let leaf_files = std::fs::read_dir(dir.path().join("leaves")).unwrap().count();
        assert_eq!(leaf_files, r.leaves);
    }
}
