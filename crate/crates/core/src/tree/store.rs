//! On-disk store layout.
//!
//! ```text
//! <dir>/manifest.tsv            graphtree v1 <k> <h> <|V|> <|E|>
//!                               node <id> <S|L> <parent|-> <children csv|-> <open-nodes csv|->
//! <dir>/leaves/leaf_<id>.tsv    N <nodeId>[ <label>] ... then E <src> <dst> <w> ...
//! <dir>/superedges/sn_<id>.tsv  <childA> <childB> <src> <dst> <w>
//! <dir>/checksums.tsv           <sha256> <relative path>
//! ```
//!
//! For leaf lines of the manifest the children field lists the member graph
//! nodes. Every file is LF-terminated and deterministically sorted.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{
    GraphTree, LeafCache, LeafSubgraph, LeafSuperNode, SuperEdge, SuperNode, SuperNodeId, TreeError, TreeNode,
};
use crate::graph::{Edge, Graph, NodeId};

pub const FORMAT_VERSION: &str = "v1";
pub const MANIFEST_FILE: &str = "manifest.tsv";
pub const CHECKSUMS_FILE: &str = "checksums.tsv";
pub(crate) const LEAVES_DIR: &str = "leaves";
pub(crate) const SUPEREDGES_DIR: &str = "superedges";
pub(crate) const STAGING_DIR: &str = "staging";

pub(crate) fn leaf_rel_path(id: SuperNodeId) -> String {
    format!("{LEAVES_DIR}/leaf_{id}.tsv")
}

pub(crate) fn superedge_rel_path(id: SuperNodeId) -> String {
    format!("{SUPEREDGES_DIR}/sn_{id}.tsv")
}

pub(crate) fn spill_path(dir: &Path, id: SuperNodeId) -> PathBuf {
    dir.join(STAGING_DIR).join(format!("ext_{id}.tsv"))
}

fn csv<T: ToString>(items: &[T]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), TreeError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| TreeError::io(parent, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| TreeError::io(path, e))?;
    f.write_all(contents).map_err(|e| TreeError::io(path, e))
}

fn read_file(path: &Path) -> Result<Vec<u8>, TreeError> {
    fs::read(path).map_err(|e| TreeError::io(path, e))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn utf8<'a>(path: &Path, bytes: &'a [u8]) -> Result<&'a str, TreeError> {
    std::str::from_utf8(bytes).map_err(|_| TreeError::corrupt(path, 0, "not valid UTF-8"))
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, s: Option<&str>, what: &str) -> Result<T, TreeError> {
    s.and_then(|s| s.parse().ok())
        .ok_or_else(|| TreeError::corrupt(path, line, format!("bad or missing {what}")))
}

fn parse_weight(path: &Path, line: usize, s: Option<&str>) -> Result<f64, TreeError> {
    let w: f64 = parse_field(path, line, s, "weight")?;
    if w.is_finite() && w > 0.0 {
        Ok(w)
    } else {
        Err(TreeError::corrupt(path, line, "weight must be positive"))
    }
}

fn parse_edge(path: &Path, line: usize, a: Option<&str>, b: Option<&str>, w: Option<&str>) -> Result<Edge, TreeError> {
    let a: NodeId = parse_field(path, line, a, "source")?;
    let b: NodeId = parse_field(path, line, b, "target")?;
    let w = parse_weight(path, line, w)?;
    let e = Edge::new(a, b, w).map_err(|e| TreeError::corrupt(path, line, e.to_string()))?;
    if e.source != a {
        return Err(TreeError::corrupt(path, line, "edge not in canonical orientation"));
    }
    Ok(e)
}

// ---- leaf files ------------------------------------------------------------

pub(crate) fn render_leaf_file<'a>(
    members: &[NodeId],
    label: impl Fn(NodeId) -> Option<&'a str>,
    edges: impl Iterator<Item = &'a Edge>,
) -> String {
    let mut s = String::new();
    for &v in members {
        match label(v) {
            Some(l) => writeln!(s, "N {v} {l}").unwrap(),
            None => writeln!(s, "N {v}").unwrap(),
        }
    }
    for e in edges {
        writeln!(s, "E {} {} {}", e.source, e.target, e.weight).unwrap();
    }
    s
}

pub(crate) struct LeafFile {
    pub members: Vec<NodeId>,
    pub labels: BTreeMap<NodeId, String>,
    pub edges: Vec<Edge>,
}

pub(crate) fn parse_leaf_text(path: &Path, text: &str) -> Result<LeafFile, TreeError> {
    let mut members = Vec::new();
    let mut labels = BTreeMap::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("N ") {
            if !edges.is_empty() {
                return Err(TreeError::corrupt(path, lineno, "node line after edge lines"));
            }
            let (id, label) = match rest.split_once(' ') {
                Some((id, label)) => (id, Some(label)),
                None => (rest, None),
            };
            let v: NodeId = parse_field(path, lineno, Some(id), "node id")?;
            if let Some(l) = label {
                labels.insert(v, l.to_string());
            }
            members.push(v);
        } else if let Some(rest) = line.strip_prefix("E ") {
            let mut f = rest.split(' ');
            edges.push(parse_edge(path, lineno, f.next(), f.next(), f.next())?);
            if f.next().is_some() {
                return Err(TreeError::corrupt(path, lineno, "trailing fields"));
            }
        } else {
            return Err(TreeError::corrupt(path, lineno, "expected `N` or `E` line"));
        }
    }
    Ok(LeafFile { members, labels, edges })
}

pub(crate) fn parse_leaf_file(path: &Path) -> Result<LeafFile, TreeError> {
    let bytes = read_file(path)?;
    parse_leaf_text(path, utf8(path, &bytes)?)
}

pub(crate) fn read_leaf_subgraph(tree: &GraphTree, leaf: &LeafSuperNode) -> Result<LeafSubgraph, TreeError> {
    let path = &leaf.leaf_file;
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(TreeError::MissingLeafFile {
                leaf: leaf.id,
                path: path.clone(),
            })
        }
        Err(e) => return Err(TreeError::io(path, e)),
    };
    if let Some(expected) = tree.checksums.get(&leaf_rel_path(leaf.id)) {
        if sha256_hex(&bytes) != *expected {
            return Err(TreeError::Checksum { path: path.clone() });
        }
    }
    let parsed = parse_leaf_text(path, utf8(path, &bytes)?)?;
    if parsed.members != leaf.members {
        return Err(TreeError::corrupt(path, 0, format!("members differ from leaf {}", leaf.id)));
    }
    Ok(LeafSubgraph {
        leaf: leaf.id,
        graph: Graph::from_canonical(parsed.members, parsed.edges, parsed.labels),
    })
}

// ---- staging spill ---------------------------------------------------------

pub(crate) fn render_spill<'a>(records: impl Iterator<Item = (&'a Edge, NodeId)>) -> String {
    let mut s = String::new();
    for (e, inside) in records {
        writeln!(s, "X {} {} {} {}", e.source, e.target, e.weight, inside).unwrap();
    }
    s
}

pub(crate) fn parse_spill(path: &Path) -> Result<Vec<(Edge, NodeId)>, TreeError> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(TreeError::io(path, e)),
    };
    let mut out = Vec::new();
    for (i, line) in utf8(path, &bytes)?.lines().enumerate() {
        let lineno = i + 1;
        let mut f = line.split(' ');
        if f.next() != Some("X") {
            return Err(TreeError::corrupt(path, lineno, "expected `X` line"));
        }
        let e = parse_edge(path, lineno, f.next(), f.next(), f.next())?;
        let inside: NodeId = parse_field(path, lineno, f.next(), "inside endpoint")?;
        if !e.touches(inside) {
            return Err(TreeError::corrupt(path, lineno, "inside endpoint not on edge"));
        }
        out.push((e, inside));
    }
    Ok(out)
}

// ---- manifest --------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ManifestHeader {
    pub k: usize,
    pub levels: usize,
    pub node_count: usize,
    pub edge_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ManifestEntry {
    pub id: SuperNodeId,
    pub is_leaf: bool,
    pub parent: Option<SuperNodeId>,
    /// Child supernode ids for `S`, member graph node ids for `L`.
    pub children: Vec<u64>,
    pub open_nodes: Vec<NodeId>,
}

fn render_manifest(tree: &GraphTree) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "graphtree {FORMAT_VERSION} {} {} {} {}",
        tree.k, tree.levels, tree.node_count, tree.edge_count
    )
    .unwrap();
    for node in &tree.nodes {
        let parent = node.parent().map(|p| p.to_string()).unwrap_or_else(|| "-".into());
        let (kind, children) = match node {
            TreeNode::Super(sn) => ("S", csv(&sn.children)),
            TreeNode::Leaf(l) => ("L", csv(&l.members)),
        };
        writeln!(
            s,
            "node {} {kind} {parent} {children} {}",
            node.id(),
            csv(node.open_nodes())
        )
        .unwrap();
    }
    s
}

fn parse_csv<T: std::str::FromStr>(path: &Path, line: usize, field: Option<&str>) -> Result<Vec<T>, TreeError> {
    match field {
        None => Err(TreeError::corrupt(path, line, "missing list field")),
        Some("-") => Ok(Vec::new()),
        Some(s) => s
            .split(',')
            .map(|x| x.parse().map_err(|_| TreeError::corrupt(path, line, format!("bad list item {x:?}"))))
            .collect(),
    }
}

pub(crate) fn parse_manifest(path: &Path) -> Result<(ManifestHeader, Vec<ManifestEntry>), TreeError> {
    let bytes = read_file(path)?;
    parse_manifest_text(path, utf8(path, &bytes)?)
}

fn parse_manifest_text(path: &Path, text: &str) -> Result<(ManifestHeader, Vec<ManifestEntry>), TreeError> {
    let mut lines = text.lines();
    let header_line = lines.next().ok_or_else(|| TreeError::corrupt(path, 1, "empty manifest"))?;
    let mut h = header_line.split(' ');
    if h.next() != Some("graphtree") {
        return Err(TreeError::corrupt(path, 1, "missing `graphtree` header"));
    }
    let version = h.next().unwrap_or("");
    if version != FORMAT_VERSION {
        return Err(TreeError::VersionMismatch {
            found: version.to_string(),
            expected: FORMAT_VERSION.to_string(),
        });
    }
    let header = ManifestHeader {
        k: parse_field(path, 1, h.next(), "k")?,
        levels: parse_field(path, 1, h.next(), "levels")?,
        node_count: parse_field(path, 1, h.next(), "|V|")?,
        edge_count: parse_field(path, 1, h.next(), "|E|")?,
    };
    let mut entries = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let mut f = line.split(' ');
        if f.next() != Some("node") {
            return Err(TreeError::corrupt(path, lineno, "expected `node` line"));
        }
        let id: SuperNodeId = parse_field(path, lineno, f.next(), "node id")?;
        let is_leaf = match f.next() {
            Some("S") => false,
            Some("L") => true,
            _ => return Err(TreeError::corrupt(path, lineno, "kind must be S or L")),
        };
        let parent = match f.next() {
            Some("-") => None,
            p => Some(parse_field(path, lineno, p, "parent")?),
        };
        let children = parse_csv(path, lineno, f.next())?;
        let open_nodes = parse_csv(path, lineno, f.next())?;
        entries.push(ManifestEntry {
            id,
            is_leaf,
            parent,
            children,
            open_nodes,
        });
    }
    Ok((header, entries))
}

// ---- superedges ------------------------------------------------------------

fn render_superedges(sn: &SuperNode) -> String {
    let mut s = String::new();
    for ((a, b), se) in &sn.superedges {
        for e in &se.edges {
            writeln!(s, "{a} {b} {} {} {}", e.source, e.target, e.weight).unwrap();
        }
    }
    s
}

pub(crate) fn parse_superedge_text(
    path: &Path,
    text: &str,
) -> Result<Vec<(SuperNodeId, SuperNodeId, Edge)>, TreeError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut f = line.split(' ');
        let a: SuperNodeId = parse_field(path, lineno, f.next(), "child a")?;
        let b: SuperNodeId = parse_field(path, lineno, f.next(), "child b")?;
        let e = parse_edge(path, lineno, f.next(), f.next(), f.next())?;
        out.push((a, b, e));
    }
    Ok(out)
}

pub(crate) fn parse_superedge_file(path: &Path) -> Result<Vec<(SuperNodeId, SuperNodeId, Edge)>, TreeError> {
    let bytes = read_file(path)?;
    parse_superedge_text(path, utf8(path, &bytes)?)
}

// ---- checksums ---------------------------------------------------------------

fn parse_checksums(dir: &Path) -> Result<BTreeMap<String, String>, TreeError> {
    let path = dir.join(CHECKSUMS_FILE);
    let bytes = read_file(&path)?;
    let mut out = BTreeMap::new();
    for (i, line) in utf8(&path, &bytes)?.lines().enumerate() {
        let (hash, rel) = line
            .split_once(' ')
            .ok_or_else(|| TreeError::corrupt(&path, i + 1, "expected `<sha256> <path>`"))?;
        out.insert(rel.to_string(), hash.to_string());
    }
    Ok(out)
}

fn verify(dir: &Path, checksums: &BTreeMap<String, String>, rel: &str, bytes: &[u8]) -> Result<(), TreeError> {
    match checksums.get(rel) {
        Some(h) if *h == sha256_hex(bytes) => Ok(()),
        _ => Err(TreeError::Checksum { path: dir.join(rel) }),
    }
}

/// Re-hash every file listed in the checksum index.
pub fn verify_store_checksums(dir: &Path) -> Result<usize, TreeError> {
    let checksums = parse_checksums(dir)?;
    for rel in checksums.keys() {
        let bytes = read_file(&dir.join(rel))?;
        verify(dir, &checksums, rel, &bytes)?;
    }
    Ok(checksums.len())
}

// ---- save / load -------------------------------------------------------------

/// Write manifest, superedge files and the checksum index for a filled
/// tree. Leaf files were written at assembly.
pub fn save_tree(tree: &GraphTree) -> Result<(), TreeError> {
    if !tree.filled {
        return Err(TreeError::NotFilled);
    }
    let dir = &tree.store_dir;
    let mut files: BTreeMap<String, String> = BTreeMap::new();

    let manifest = render_manifest(tree);
    write_file(&dir.join(MANIFEST_FILE), manifest.as_bytes())?;
    files.insert(MANIFEST_FILE.to_string(), sha256_hex(manifest.as_bytes()));

    for sn in tree.supernodes() {
        let rel = superedge_rel_path(sn.id);
        let text = render_superedges(sn);
        write_file(&dir.join(&rel), text.as_bytes())?;
        files.insert(rel, sha256_hex(text.as_bytes()));
    }
    for leaf in tree.leaves() {
        let rel = leaf_rel_path(leaf.id);
        let bytes = match fs::read(&leaf.leaf_file) {
            Ok(b) => b,
            Err(_) => {
                return Err(TreeError::MissingLeafFile {
                    leaf: leaf.id,
                    path: leaf.leaf_file.clone(),
                })
            }
        };
        files.insert(rel, sha256_hex(&bytes));
    }
    let mut index = String::new();
    for (rel, hash) in &files {
        writeln!(index, "{hash} {rel}").unwrap();
    }
    write_file(&dir.join(CHECKSUMS_FILE), index.as_bytes())
}

/// Open a saved store. Leaves start collapsed; leaf files are only checked
/// for presence here and verified against their checksum when expanded.
pub fn load_tree(dir: &Path, cache_capacity: usize) -> Result<GraphTree, TreeError> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest_bytes = read_file(&manifest_path)?;
    let (header, entries) = parse_manifest_text(&manifest_path, utf8(&manifest_path, &manifest_bytes)?)?;
    let checksums = parse_checksums(dir)?;
    verify(dir, &checksums, MANIFEST_FILE, &manifest_bytes)?;

    let corrupt = |line: usize, reason: String| TreeError::corrupt(&manifest_path, line, reason);
    let n = entries.len();
    for (i, e) in entries.iter().enumerate() {
        if e.id.0 as usize != i {
            return Err(corrupt(i + 2, format!("expected node {i}, found {}", e.id)));
        }
        if let Some(p) = e.parent {
            if p.0 as usize >= n || entries[p.0 as usize].is_leaf {
                return Err(corrupt(i + 2, format!("invalid parent {p}")));
            }
        }
    }
    let root = entries
        .iter()
        .find(|e| e.parent.is_none())
        .map(|e| e.id)
        .ok_or_else(|| corrupt(1, "no root".into()))?;

    // Parents precede children in breadth-first numbering, but compute depth
    // by walking so a reordered manifest cannot produce wrong depths.
    let depth_of = |mut id: SuperNodeId| {
        let mut d = 0;
        while let Some(p) = entries[id.0 as usize].parent {
            d += 1;
            id = p;
            if d > n {
                return None;
            }
        }
        Some(d)
    };

    let mut nodes = Vec::with_capacity(n);
    let mut node_index = HashMap::new();
    for (i, e) in entries.iter().enumerate() {
        let depth = depth_of(e.id).ok_or_else(|| corrupt(i + 2, "parent cycle".into()))?;
        if e.is_leaf {
            let parent = e.parent.ok_or_else(|| corrupt(i + 2, "leaf without parent".into()))?;
            let members: Vec<NodeId> = e.children.iter().map(|&v| NodeId(v)).collect();
            let leaf_file = dir.join(leaf_rel_path(e.id));
            if !leaf_file.is_file() {
                return Err(TreeError::MissingLeafFile {
                    leaf: e.id,
                    path: leaf_file,
                });
            }
            for &v in &members {
                if node_index.insert(v, e.id).is_some() {
                    return Err(corrupt(i + 2, format!("node {v} in two leaves")));
                }
            }
            nodes.push(TreeNode::Leaf(LeafSuperNode {
                id: e.id,
                parent,
                members,
                open_nodes: e.open_nodes.clone(),
                leaf_file,
                depth,
            }));
        } else {
            let children: Vec<SuperNodeId> = e.children.iter().map(|&c| SuperNodeId(c as u32)).collect();
            for c in &children {
                if c.0 as usize >= n || entries[c.0 as usize].parent != Some(e.id) {
                    return Err(corrupt(i + 2, format!("child {c} does not point back")));
                }
            }
            let mut superedges = BTreeMap::new();
            for (x, &a) in children.iter().enumerate() {
                for &b in &children[x + 1..] {
                    let key = if a < b { (a, b) } else { (b, a) };
                    superedges.insert(key, SuperEdge::empty(key.0, key.1));
                }
            }
            let rel = superedge_rel_path(e.id);
            let path = dir.join(&rel);
            let bytes = read_file(&path)?;
            verify(dir, &checksums, &rel, &bytes)?;
            for (line, (a, b, edge)) in parse_superedge_text(&path, utf8(&path, &bytes)?)?.into_iter().enumerate() {
                let se = superedges
                    .get_mut(&(a, b))
                    .ok_or_else(|| TreeError::corrupt(&path, line + 1, format!("({a}, {b}) is not a child pair")))?;
                se.edges.push(edge);
            }
            nodes.push(TreeNode::Super(SuperNode {
                id: e.id,
                parent: e.parent,
                children,
                superedges,
                open_nodes: e.open_nodes.clone(),
                depth,
                closure_size: 0,
            }));
        }
    }
    super::assemble::compute_closure_sizes(&mut nodes, root);

    Ok(GraphTree {
        root,
        nodes,
        node_index,
        store_dir: dir.to_path_buf(),
        k: header.k,
        levels: header.levels,
        node_count: header.node_count,
        edge_count: header.edge_count,
        filled: true,
        cache: LeafCache::new(cache_capacity),
        checksums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixture;

    fn saved() -> (tempfile::TempDir, GraphTree) {
        let dir = tempfile::tempdir().unwrap();
        let t = fixture::filled(dir.path());
        save_tree(&t).unwrap();
        (dir, t)
    }

    #[test]
    fn round_trip_preserves_structure() {
        let (dir, t) = saved();
        let back = load_tree(dir.path(), 4).unwrap();
        assert_eq!(back.nodes(), t.nodes());
        assert_eq!(back.root(), t.root());
        assert_eq!(back.node_count(), 8);
        assert_eq!(back.edge_count(), 8);
        for id in 0..7 {
            assert_eq!(back.closure(SuperNodeId(id)).unwrap(), t.closure(SuperNodeId(id)).unwrap());
        }
        assert_eq!(back.cache_stats().resident, 0);
    }

    #[test]
    fn manifest_text_is_as_documented() {
        let (dir, _) = saved();
        let text = fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "graphtree v1 2 3 8 8");
        assert_eq!(lines[1], "node 0 S - 1,2 -");
        assert_eq!(lines[2], "node 1 S 0 3,4 4");
        assert_eq!(lines[4], "node 3 L 1 1,2 2");
        let se = fs::read_to_string(dir.path().join("superedges/sn_1.tsv")).unwrap();
        assert_eq!(se, "3 4 2 3 1\n3 4 2 4 1\n");
        let leaf = fs::read_to_string(dir.path().join("leaves/leaf_3.tsv")).unwrap();
        assert_eq!(leaf, "N 1\nN 2\nE 1 2 1\n");
        assert!(!dir.path().join(STAGING_DIR).exists());
    }

    #[test]
    fn missing_leaf_file_names_the_leaf() {
        let (dir, _) = saved();
        fs::remove_file(dir.path().join("leaves/leaf_5.tsv")).unwrap();
        match load_tree(dir.path(), 4) {
            Err(TreeError::MissingLeafFile { leaf, .. }) => assert_eq!(leaf, SuperNodeId(5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_mismatch() {
        let (dir, _) = saved();
        let p = dir.path().join(MANIFEST_FILE);
        let text = fs::read_to_string(&p).unwrap().replacen("v1", "v9", 1);
        fs::write(&p, text).unwrap();
        assert!(matches!(load_tree(dir.path(), 4), Err(TreeError::VersionMismatch { .. })));
    }

    #[test]
    fn tampered_files_fail_checksum() {
        let (dir, _) = saved();
        let p = dir.path().join("superedges/sn_0.tsv");
        fs::write(&p, "1 2 4 5 7\n").unwrap();
        assert!(matches!(load_tree(dir.path(), 4), Err(TreeError::Checksum { .. })));

        let (dir, _) = saved();
        let p = dir.path().join("leaves/leaf_4.tsv");
        fs::write(&p, "N 3\nN 4\n").unwrap();
        let t = load_tree(dir.path(), 4).unwrap();
        assert!(matches!(t.expand_leaf(SuperNodeId(4)), Err(TreeError::Checksum { .. })));
        assert!(verify_store_checksums(dir.path()).is_err());
    }

    #[test]
    fn closure_without_expanding() {
        let (dir, _) = saved();
        let t = load_tree(dir.path(), 4).unwrap();
        assert_eq!(
            t.closure(SuperNodeId(2)).unwrap(),
            vec![NodeId(5), NodeId(6), NodeId(7), NodeId(8)]
        );
        assert_eq!(t.cache_stats().loads, 0);
    }
}
