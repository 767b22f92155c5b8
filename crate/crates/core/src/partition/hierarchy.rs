//! Recursive k-way partitioning into an `h`-level hierarchy.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use rayon::prelude::*;

use super::{balance_cap, derive_seed, recursive_bisection, validate, Csr, PartitionError, DEFAULT_EPSILON};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchySpec {
    /// Fanout per level.
    pub k: usize,
    /// Number of levels; the root is level 0 and leaves sit at `levels - 1`.
    pub levels: usize,
    pub epsilon: f64,
    /// Plan nodes with fewer members are not split further.
    pub min_leaf_size: usize,
    /// Minimize the weighted cut instead of the edge count.
    pub weighted_cut: bool,
}

impl HierarchySpec {
    pub fn new(k: usize, levels: usize) -> Self {
        HierarchySpec {
            k,
            levels,
            epsilon: DEFAULT_EPSILON,
            min_leaf_size: 2 * k,
            weighted_cut: true,
        }
    }

    pub fn validate(&self) -> Result<(), PartitionError> {
        validate(self.k, self.epsilon)?;
        if self.levels < 1 {
            return Err(PartitionError::InvalidLevels(self.levels));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanNode {
    /// Ascending.
    pub members: Vec<NodeId>,
    pub children: Vec<PlanNode>,
}

impl PlanNode {
    pub fn leaf(mut members: Vec<NodeId>) -> Self {
        members.sort_unstable();
        PlanNode {
            members,
            children: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyPlan {
    pub root: PlanNode,
}

impl HierarchyPlan {
    /// Leaves in depth-first order with their dotted paths (`0` is the root,
    /// `0.3.1` is child 1 of child 3 of the root).
    pub fn leaves(&self) -> Vec<(String, &PlanNode)> {
        fn walk<'a>(n: &'a PlanNode, path: String, out: &mut Vec<(String, &'a PlanNode)>) {
            if n.is_leaf() {
                out.push((path, n));
            } else {
                for (i, c) in n.children.iter().enumerate() {
                    walk(c, format!("{path}.{i}"), out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, "0".to_string(), &mut out);
        out
    }

    /// Number of levels, counting the root.
    pub fn depth(&self) -> usize {
        fn d(n: &PlanNode) -> usize {
            1 + n.children.iter().map(d).max().unwrap_or(0)
        }
        d(&self.root)
    }

    pub fn max_fanout(&self) -> usize {
        fn f(n: &PlanNode) -> usize {
            n.children.iter().map(f).max().unwrap_or(0).max(n.children.len())
        }
        f(&self.root)
    }

    /// One line per leaf: `leaf <path> : id,id,...`.
    pub fn write_leaves<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (path, leaf) in self.leaves() {
            let ids: Vec<String> = leaf.members.iter().map(ToString::to_string).collect();
            writeln!(out, "leaf {path} : {}", ids.join(","))?;
        }
        Ok(())
    }

    /// Parse the leaf-line format back into a plan. Internal members are the
    /// union of their children; child indices must be contiguous from 0.
    pub fn read_leaves<R: BufRead>(reader: R) -> Result<HierarchyPlan, PartitionError> {
        #[derive(Default)]
        struct Draft {
            members: Option<Vec<NodeId>>,
            children: BTreeMap<usize, Draft>,
        }
        let syntax = |line: usize, reason: String| PartitionError::PlanSyntax { line, reason };
        let mut root = Draft::default();
        let mut seen = std::collections::HashSet::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| syntax(lineno, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let rest = line
                .strip_prefix("leaf ")
                .ok_or_else(|| syntax(lineno, "expected `leaf <path> : ids`".into()))?;
            let (path, ids) = rest
                .split_once(':')
                .ok_or_else(|| syntax(lineno, "missing `:`".into()))?;
            let mut comps = path.trim().split('.');
            if comps.next() != Some("0") {
                return Err(syntax(lineno, "path must start at root `0`".into()));
            }
            let mut node = &mut root;
            for c in comps {
                let idx: usize = c
                    .parse()
                    .map_err(|_| syntax(lineno, format!("bad path component {c:?}")))?;
                if node.members.is_some() {
                    return Err(syntax(lineno, format!("{path} descends below a leaf")));
                }
                node = node.children.entry(idx).or_default();
            }
            if node.members.is_some() || !node.children.is_empty() {
                return Err(syntax(lineno, format!("duplicate or non-leaf path {}", path.trim())));
            }
            let mut members = Vec::new();
            for id in ids.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let v = id
                    .parse::<NodeId>()
                    .map_err(|_| syntax(lineno, format!("bad node id {id:?}")))?;
                if !seen.insert(v) {
                    return Err(syntax(lineno, format!("node {v} appears in more than one leaf")));
                }
                members.push(v);
            }
            if members.is_empty() {
                return Err(syntax(lineno, "empty leaf".into()));
            }
            node.members = Some(members);
        }
        fn finish(d: Draft, path: &str) -> Result<PlanNode, PartitionError> {
            if let Some(m) = d.members {
                return Ok(PlanNode::leaf(m));
            }
            if d.children.is_empty() {
                return Err(PartitionError::PlanSyntax {
                    line: 0,
                    reason: format!("plan node {path} has no leaves"),
                });
            }
            let mut children = Vec::new();
            for (expect, (idx, c)) in d.children.into_iter().enumerate() {
                if idx != expect {
                    return Err(PartitionError::PlanSyntax {
                        line: 0,
                        reason: format!("plan node {path} is missing child {expect}"),
                    });
                }
                children.push(finish(c, &format!("{path}.{idx}"))?);
            }
            let mut members: Vec<NodeId> = children.iter().flat_map(|c| c.members.iter().copied()).collect();
            members.sort_unstable();
            Ok(PlanNode { members, children })
        }
        Ok(HierarchyPlan {
            root: finish(root, "0")?,
        })
    }
}

/// Recursively k-way partition `g` into a plan tree of depth `spec.levels`.
pub fn build_hierarchy(g: &Graph, spec: &HierarchySpec, seed: u64) -> Result<HierarchyPlan, PartitionError> {
    spec.validate()?;
    let csr = Csr::from_graph(g, spec.weighted_cut);
    let members: Vec<u32> = (0..g.node_count() as u32).collect();
    let dense = plan_node(&csr, members, 0, "0".to_string(), spec, seed)?;
    Ok(HierarchyPlan {
        root: to_ids(g, dense),
    })
}

struct DenseNode {
    members: Vec<u32>,
    children: Vec<DenseNode>,
}

fn to_ids(g: &Graph, n: DenseNode) -> PlanNode {
    // Dense indices follow ascending node id, so member order is preserved.
    PlanNode {
        members: n.members.iter().map(|&i| g.id_at(i as usize)).collect(),
        children: n.children.into_iter().map(|c| to_ids(g, c)).collect(),
    }
}

fn plan_node(
    csr: &Csr,
    members: Vec<u32>,
    depth: usize,
    path: String,
    spec: &HierarchySpec,
    seed: u64,
) -> Result<DenseNode, PartitionError> {
    let n = members.len();
    if depth + 1 >= spec.levels || n < spec.min_leaf_size {
        return Ok(DenseNode {
            members,
            children: Vec::new(),
        });
    }
    if n < spec.k {
        return Err(PartitionError::AtPlanNode {
            path,
            source: Box::new(PartitionError::TooFewNodes { nodes: n, k: spec.k }),
        });
    }
    let cap = balance_cap(n as u64, spec.k, spec.epsilon);
    let labels = recursive_bisection(csr, spec.k, cap, derive_seed(seed, 0));
    let mut groups: Vec<Vec<u32>> = vec![Vec::new(); spec.k];
    for (local, &p) in labels.iter().enumerate() {
        groups[p as usize].push(local as u32);
    }
    groups
        .into_par_iter()
        .enumerate()
        .map(|(i, local)| {
            let sub = csr.induced(&local);
            let global: Vec<u32> = local.iter().map(|&l| members[l as usize]).collect();
            plan_node(&sub, global, depth + 1, format!("{path}.{i}"), spec, derive_seed(seed, i as u64 + 1))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(|children| DenseNode { members, children })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use std::collections::BTreeSet;

    #[test]
    fn single_level_is_one_leaf() {
        let g = synth::gnm(30, 60, 1);
        let plan = build_hierarchy(&g, &HierarchySpec::new(2, 1), 0).unwrap();
        assert!(plan.root.is_leaf());
        assert_eq!(plan.root.members, g.nodes());
        assert_eq!(plan.depth(), 1);
    }

    #[test]
    fn plan_levels_partition_parents() {
        let g = synth::gnm(40, 100, 2);
        let plan = build_hierarchy(&g, &HierarchySpec::new(2, 3), 9).unwrap();
        fn audit(n: &PlanNode) {
            if n.is_leaf() {
                return;
            }
            let mut union: Vec<NodeId> = n.children.iter().flat_map(|c| c.members.clone()).collect();
            union.sort_unstable();
            assert_eq!(union, n.members, "children must partition the parent exactly");
            n.children.iter().for_each(audit);
        }
        audit(&plan.root);
        assert_eq!(plan.depth(), 3);
        assert_eq!(plan.leaves().len(), 4);
    }

    #[test]
    fn min_leaf_size_stops_early() {
        let g = synth::gnm(12, 30, 3);
        let mut spec = HierarchySpec::new(3, 4);
        spec.min_leaf_size = 6;
        let plan = build_hierarchy(&g, &spec, 1).unwrap();
        // 12 -> 3 parts of at most 5 < 6, so recursion stops at depth 1.
        assert_eq!(plan.depth(), 2);
        assert_eq!(plan.leaves().len(), 3);
    }

    #[test]
    fn too_few_nodes_reports_path() {
        let g = synth::gnm(4, 4, 3);
        let mut spec = HierarchySpec::new(3, 3);
        spec.min_leaf_size = 0;
        let err = build_hierarchy(&g, &spec, 1).unwrap_err();
        assert!(matches!(err, PartitionError::AtPlanNode { ref path, .. } if path.starts_with("0.")), "{err}");
    }

    #[test]
    fn leaf_lines_round_trip() {
        let g = synth::gnm(50, 120, 4);
        let plan = build_hierarchy(&g, &HierarchySpec::new(3, 3), 5).unwrap();
        let mut buf = Vec::new();
        plan.write_leaves(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().all(|l| l.starts_with("leaf 0.")));
        let back = HierarchyPlan::read_leaves(buf.as_slice()).unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn plan_syntax_errors() {
        assert!(HierarchyPlan::read_leaves("leaf 1.0 : 1,2\n".as_bytes()).is_err());
        assert!(HierarchyPlan::read_leaves("leaf 0.1 : 1,2\n".as_bytes()).is_err());
        assert!(HierarchyPlan::read_leaves("leaf 0.0 : 1\nleaf 0.0.1 : 2\n".as_bytes()).is_err());
        let p = HierarchyPlan::read_leaves("leaf 0.0 : 2,1\nleaf 0.1 : 3\n".as_bytes()).unwrap();
        let all: BTreeSet<_> = p.root.members.iter().copied().collect();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn deterministic_plans() {
        let g = synth::gnm(200, 600, 5);
        let spec = HierarchySpec::new(3, 3);
        assert_eq!(build_hierarchy(&g, &spec, 7).unwrap(), build_hierarchy(&g, &spec, 7).unwrap());
    }
}
