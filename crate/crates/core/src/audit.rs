//! Store audit that works from the files alone, never from an in-memory
//! tree: it re-reads the manifest, every leaf file and every superedge file
//! and recomputes what the builder claims.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::graph::{Graph, NodeId};
use crate::tree::{
    parse_leaf_file, parse_manifest, parse_superedge_file, verify_store_checksums, ManifestEntry, SuperNodeId,
    TreeError,
};

#[derive(Debug, Clone, Copy, Default)]
pub struct AuditOptions<'a> {
    /// Source graph; when given, the stored edges must equal its edge set.
    pub graph: Option<&'a Graph>,
    /// Balance tolerance to enforce on every split.
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    /// Leaf member sets are pairwise disjoint.
    pub eq1_ok: bool,
    /// Leaf member sets cover V.
    pub eq2_ok: bool,
    /// Internal and cross edges together hold every edge exactly once.
    pub eq6_ok: bool,
    pub open_nodes_ok: bool,
    pub structure_ok: bool,
    pub checksums_ok: bool,
    pub balance_ok: bool,
    /// Largest child closure relative to an even split, over all splits.
    pub balance_achieved: f64,
    pub residual_at_root: usize,
    pub leaf_count: usize,
    pub supernode_count: usize,
    pub internal_edges: usize,
    pub cross_edges: usize,
    pub details: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.eq1_ok
            && self.eq2_ok
            && self.eq6_ok
            && self.open_nodes_ok
            && self.structure_ok
            && self.checksums_ok
            && self.balance_ok
            && self.residual_at_root == 0
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(f, "leaves disjoint            {}", mark(self.eq1_ok))?;
        writeln!(f, "leaves cover V             {}", mark(self.eq2_ok))?;
        writeln!(f, "edges stored exactly once  {}", mark(self.eq6_ok))?;
        writeln!(f, "open nodes                 {}", mark(self.open_nodes_ok))?;
        writeln!(f, "structure                  {}", mark(self.structure_ok))?;
        writeln!(f, "checksums                  {}", mark(self.checksums_ok))?;
        writeln!(f, "balance                    {} ({:.4})", mark(self.balance_ok), self.balance_achieved)?;
        writeln!(f, "residual at root           {}", self.residual_at_root)?;
        writeln!(
            f,
            "{} leaves, {} supernodes, {} internal + {} cross edges",
            self.leaf_count, self.supernode_count, self.internal_edges, self.cross_edges
        )?;
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

struct Checker {
    details: Vec<String>,
}

impl Checker {
    fn fail(&mut self, flag: &mut bool, msg: String) {
        *flag = false;
        if self.details.len() < 50 {
            self.details.push(msg);
        }
    }
}

/// Audit the store at `dir`. Only unreadable or unparsable files produce an
/// error; every failed check is reported in the result.
pub fn audit_store(dir: &Path, opts: &AuditOptions) -> Result<AuditReport, TreeError> {
    let mut c = Checker { details: Vec::new() };
    let (header, entries) = parse_manifest(&dir.join(crate::tree::MANIFEST_FILE))?;
    let n = entries.len();

    let mut checksums_ok = true;
    if let Err(e) = verify_store_checksums(dir) {
        c.fail(&mut checksums_ok, format!("checksums: {e}"));
    }

    // Structure: dense ids, one root, parent links agree with child lists,
    // children all leaves or all supernodes.
    let mut structure_ok = true;
    let mut roots = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if e.id.0 as usize != i {
            c.fail(&mut structure_ok, format!("manifest line {} has id {}", i + 2, e.id));
        }
        match e.parent {
            None => roots.push(e.id),
            Some(p) => {
                let ok = entries
                    .get(p.0 as usize)
                    .is_some_and(|pe| !pe.is_leaf && pe.children.contains(&(e.id.0 as u64)));
                if !ok {
                    c.fail(&mut structure_ok, format!("node {} not listed by parent {p}", e.id));
                }
            }
        }
        if !e.is_leaf {
            let kinds: HashSet<bool> = e
                .children
                .iter()
                .filter_map(|&ch| entries.get(ch as usize).map(|x| x.is_leaf))
                .collect();
            if e.children.is_empty() || kinds.len() > 1 {
                c.fail(&mut structure_ok, format!("supernode {} has empty or mixed children", e.id));
            }
            for &ch in &e.children {
                if entries.get(ch as usize).and_then(|x| x.parent) != Some(e.id) {
                    c.fail(&mut structure_ok, format!("child {ch} of {} does not point back", e.id));
                }
            }
        }
    }
    if roots.len() != 1 {
        c.fail(&mut structure_ok, format!("{} roots", roots.len()));
    } else if structure_ok {
        let mut reached = vec![false; n];
        let mut stack = vec![roots[0].0 as usize];
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut reached[i], true) {
                continue;
            }
            if !entries[i].is_leaf {
                stack.extend(entries[i].children.iter().map(|&ch| ch as usize).filter(|&ch| ch < n));
            }
        }
        let unreached = reached.iter().filter(|r| !**r).count();
        if unreached > 0 {
            c.fail(&mut structure_ok, format!("{unreached} nodes unreachable from the root"));
        }
    }
    if !structure_ok {
        return Ok(report(c, Default::default()));
    }
    let root = roots[0];

    // Leaves: read every file.
    let mut eq1_ok = true;
    let mut owner: HashMap<NodeId, SuperNodeId> = HashMap::new();
    let mut internal: Vec<(NodeId, NodeId, f64, SuperNodeId)> = Vec::new();
    for e in entries.iter().filter(|e| e.is_leaf) {
        let path = dir.join(format!("leaves/leaf_{}.tsv", e.id));
        let leaf = parse_leaf_file(&path)?;
        let listed: Vec<NodeId> = e.children.iter().map(|&v| NodeId(v)).collect();
        if leaf.members != listed {
            c.fail(&mut structure_ok, format!("leaf {} file members differ from manifest", e.id));
        }
        if leaf.members.is_empty() {
            c.fail(&mut structure_ok, format!("leaf {} is empty", e.id));
        }
        for &v in &leaf.members {
            if let Some(prev) = owner.insert(v, e.id) {
                c.fail(&mut eq1_ok, format!("node {v} in leaves {prev} and {}", e.id));
            }
        }
        for edge in leaf.edges {
            internal.push((edge.source, edge.target, edge.weight, e.id));
        }
    }

    let mut eq2_ok = true;
    if owner.len() != header.node_count {
        c.fail(
            &mut eq2_ok,
            format!("leaves hold {} nodes, header says {}", owner.len(), header.node_count),
        );
    }
    if let Some(g) = opts.graph {
        let stored: HashSet<NodeId> = owner.keys().copied().collect();
        let expected: HashSet<NodeId> = g.nodes().iter().copied().collect();
        if stored != expected {
            let missing = expected.difference(&stored).count();
            let extra = stored.difference(&expected).count();
            c.fail(&mut eq2_ok, format!("leaf union differs from V: {missing} missing, {extra} extra"));
        }
    }

    // Ancestor chains for closure membership.
    let parent = |id: SuperNodeId| entries[id.0 as usize].parent;
    let depth: Vec<usize> = (0..n)
        .map(|i| {
            let mut d = 0;
            let mut cur = SuperNodeId(i as u32);
            while let Some(p) = parent(cur) {
                d += 1;
                cur = p;
            }
            d
        })
        .collect();
    let under = |anc: SuperNodeId, mut node: SuperNodeId| -> Option<SuperNodeId> {
        // Child of `anc` on the way to `node`, if `anc` is a strict ancestor.
        while let Some(p) = parent(node) {
            if p == anc {
                return Some(node);
            }
            if depth[p.0 as usize] <= depth[anc.0 as usize] {
                return None;
            }
            node = p;
        }
        None
    };

    // Edges: each exactly once, in the right place.
    let mut eq6_ok = true;
    let mut residual = 0usize;
    let mut seen: HashMap<(NodeId, NodeId), f64> = HashMap::new();
    let mut expected_open: Vec<HashSet<NodeId>> = vec![HashSet::new(); n];
    let internal_edges = internal.len();
    for (a, b, w, leaf) in internal {
        if owner.get(&a) != Some(&leaf) || owner.get(&b) != Some(&leaf) {
            c.fail(&mut eq6_ok, format!("internal edge ({a}, {b}) of leaf {leaf} leaves the leaf"));
        }
        if seen.insert((a, b), w).is_some() {
            c.fail(&mut eq6_ok, format!("edge ({a}, {b}) stored twice"));
        }
    }
    let mut cross_edges = 0;
    for e in entries.iter().filter(|e| !e.is_leaf) {
        let path = dir.join(format!("superedges/sn_{}.tsv", e.id));
        for (x, y, edge) in parse_superedge_file(&path)? {
            cross_edges += 1;
            let (a, b) = (edge.source, edge.target);
            if seen.insert((a, b), edge.weight).is_some() {
                c.fail(&mut eq6_ok, format!("edge ({a}, {b}) stored twice"));
            }
            let (Some(&la), Some(&lb)) = (owner.get(&a), owner.get(&b)) else {
                residual += 1;
                c.fail(&mut eq6_ok, format!("edge ({a}, {b}) has an endpoint in no leaf"));
                continue;
            };
            let (ca, cb) = (under(e.id, la), under(e.id, lb));
            let placed = (ca == Some(x) && cb == Some(y)) || (ca == Some(y) && cb == Some(x));
            if x >= y || !placed {
                c.fail(
                    &mut eq6_ok,
                    format!("edge ({a}, {b}) filed under ({x}, {y}) at {} does not cross that pair", e.id),
                );
                continue;
            }
            // Every tree node strictly below the meeting point on either side
            // sees the edge leave its closure.
            for (v, mut node) in [(a, la), (b, lb)] {
                while node != e.id {
                    expected_open[node.0 as usize].insert(v);
                    node = parent(node).expect("below meeting point");
                }
            }
        }
    }
    if seen.len() != header.edge_count {
        c.fail(
            &mut eq6_ok,
            format!("store holds {} edges, header says {}", seen.len(), header.edge_count),
        );
    }
    if let Some(g) = opts.graph {
        let mut diff = 0;
        for edge in g.edges() {
            match seen.get(&edge.key()) {
                Some(&w) if w == edge.weight => {}
                _ => diff += 1,
            }
        }
        if diff > 0 || seen.len() != g.edge_count() {
            c.fail(
                &mut eq6_ok,
                format!("{diff} edges of G missing or reweighted; store {} vs G {}", seen.len(), g.edge_count()),
            );
        }
    }

    let mut open_nodes_ok = true;
    for e in &entries {
        let mut expected: Vec<NodeId> = expected_open[e.id.0 as usize].iter().copied().collect();
        expected.sort_unstable();
        if expected != e.open_nodes {
            c.fail(
                &mut open_nodes_ok,
                format!(
                    "node {}: {} open nodes stored, {} recomputed",
                    e.id,
                    e.open_nodes.len(),
                    expected.len()
                ),
            );
        }
    }
    residual += entries[root.0 as usize].open_nodes.len();

    let (balance_achieved, balance_ok) = balance(&entries, opts.epsilon, &mut c);

    let leaf_count = entries.iter().filter(|e| e.is_leaf).count();
    let summary = Summary {
        eq1_ok,
        eq2_ok,
        eq6_ok,
        open_nodes_ok,
        structure_ok,
        checksums_ok,
        balance_ok,
        balance_achieved,
        residual,
        leaf_count,
        supernode_count: n - leaf_count,
        internal_edges,
        cross_edges,
    };
    Ok(report(c, summary))
}

fn balance(
    entries: &[ManifestEntry],
    epsilon: Option<f64>,
    c: &mut Checker,
) -> (f64, bool) {
    let mut size = vec![0usize; entries.len()];
    // Children carry larger ids than parents only under breadth-first
    // numbering; sum by explicit post-order instead.
    let mut order = Vec::new();
    let mut stack: Vec<usize> = entries.iter().filter(|e| e.parent.is_none()).map(|e| e.id.0 as usize).collect();
    while let Some(i) = stack.pop() {
        order.push(i);
        if !entries[i].is_leaf {
            stack.extend(entries[i].children.iter().map(|&ch| ch as usize));
        }
    }
    for &i in order.iter().rev() {
        size[i] = if entries[i].is_leaf {
            entries[i].children.len()
        } else {
            entries[i].children.iter().map(|&ch| size[ch as usize]).sum()
        };
    }
    let mut worst: f64 = 1.0;
    let mut ok = true;
    for e in entries.iter().filter(|e| !e.is_leaf && e.children.len() > 1) {
        let total = size[e.id.0 as usize];
        let k = e.children.len();
        let largest = e.children.iter().map(|&ch| size[ch as usize]).max().unwrap_or(0);
        worst = worst.max(largest as f64 * k as f64 / total as f64);
        if let Some(eps) = epsilon {
            let cap = (((1.0 + eps) * total as f64 / k as f64) - 1e-9).ceil().max(total.div_ceil(k) as f64) as usize;
            if largest > cap {
                c.fail(&mut ok, format!("supernode {}: part of {largest} exceeds cap {cap}", e.id));
            }
        }
    }
    (worst, ok)
}

#[derive(Default)]
struct Summary {
    eq1_ok: bool,
    eq2_ok: bool,
    eq6_ok: bool,
    open_nodes_ok: bool,
    structure_ok: bool,
    checksums_ok: bool,
    balance_ok: bool,
    balance_achieved: f64,
    residual: usize,
    leaf_count: usize,
    supernode_count: usize,
    internal_edges: usize,
    cross_edges: usize,
}

fn report(c: Checker, s: Summary) -> AuditReport {
    AuditReport {
        eq1_ok: s.eq1_ok,
        eq2_ok: s.eq2_ok,
        eq6_ok: s.eq6_ok,
        open_nodes_ok: s.open_nodes_ok,
        structure_ok: s.structure_ok,
        checksums_ok: s.checksums_ok,
        balance_ok: s.balance_ok,
        balance_achieved: s.balance_achieved,
        residual_at_root: s.residual,
        leaf_count: s.leaf_count,
        supernode_count: s.supernode_count,
        internal_edges: s.internal_edges,
        cross_edges: s.cross_edges,
        details: c.details,
    }
}
