//! C ABI over the supergraph store.
//!
//! Trees are opaque `SgTree` handles. Every fallible call returns an
//! `SgStatus`; on failure `sg_last_error()` describes the problem. Strings
//! handed out by the library are JSON and must be released with
//! `sg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use serde::Serialize;
use supergraph::audit::{audit_store, AuditOptions};
use supergraph::connectivity::QueryError;
use supergraph::engine::Engine;
use supergraph::error::exit;
use supergraph::graph::{load_graph, NodeId};
use supergraph::pipeline::{build_store, BuildOptions};
use supergraph::tree::{SuperNodeId, TreeError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A stored invariant does not hold (audit failure, corrupt store).
    Invariant = 2,
    /// Malformed input or parameters.
    BadInput = 3,
    Io = 4,
    /// Unknown tree node or graph node id.
    NotFound = 5,
    /// Same, nested or otherwise unusable pair for connectivity.
    InvalidPair = 6,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 7,
    /// The library panicked; the handle may be unusable.
    Panic = 8,
}

/// Opaque handle to an opened store.
pub struct SgTree {
    engine: Engine,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("argument `{0}` is null")]
    Null(&'static str),
    #[error("argument `{0}` is not valid UTF-8")]
    Utf8(&'static str),
    #[error(transparent)]
    Core(#[from] supergraph::Error),
}

impl Failure {
    fn status(&self) -> SgStatus {
        use supergraph::Error as E;
        match self {
            Failure::Null(_) => SgStatus::NullArgument,
            Failure::Utf8(_) => SgStatus::InvalidUtf8,
            Failure::Core(E::Tree(TreeError::UnknownSuperNode(_)))
            | Failure::Core(E::Query(QueryError::Tree(TreeError::UnknownSuperNode(_))))
            | Failure::Core(E::Query(QueryError::UnknownNode(_))) => SgStatus::NotFound,
            Failure::Core(E::Query(QueryError::Nested { .. } | QueryError::SameNode(_))) => SgStatus::InvalidPair,
            Failure::Core(e) => match e.exit_code() {
                exit::INVARIANT => SgStatus::Invariant,
                exit::IO => SgStatus::Io,
                _ => SgStatus::BadInput,
            },
        }
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        Failure::Core(e.into())
    }
}

impl From<supergraph::graph::GraphError> for Failure {
    fn from(e: supergraph::graph::GraphError) -> Self {
        Failure::Core(e.into())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SgStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err(e)) => {
            let status = e.status();
            set_last_error(e.to_string());
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(name))
}

unsafe fn path_arg(p: *const c_char, name: &'static str) -> Result<PathBuf, Failure> {
    str_arg(p, name).map(PathBuf::from)
}

unsafe fn tree_arg<'a>(p: *const SgTree) -> Result<&'a SgTree, Failure> {
    p.as_ref().ok_or(Failure::Null("tree"))
}

unsafe fn write_json<T: Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out_json"));
    }
    let text = serde_json::to_string(value).expect("views serialize");
    *out = CString::new(text).expect("JSON escapes nul").into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Partition the edge list at `input` (labels optional), build, fill, save and
/// audit a store in `out_dir`. `out_report_json` may be null.
///
/// # Safety
/// String arguments must be null or nul-terminated; `out_report_json` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn sg_build(
    input: *const c_char,
    labels: *const c_char,
    k: usize,
    levels: usize,
    epsilon: f64,
    seed: u64,
    out_dir: *const c_char,
    out_report_json: *mut *mut c_char,
) -> SgStatus {
    guard(|| {
        let input = path_arg(input, "input")?;
        let labels = if labels.is_null() { None } else { Some(path_arg(labels, "labels")?) };
        let out_dir = path_arg(out_dir, "out_dir")?;
        let g = load_graph(&input, labels.as_deref())?;
        let mut opts = BuildOptions::new(k, levels);
        opts.epsilon = epsilon;
        opts.seed = seed;
        let (_, report) = build_store(&g, &opts, &out_dir)?;
        if !out_report_json.is_null() {
            write_json(out_report_json, &report)?;
        }
        Ok(())
    })
}

/// Re-scan a store's files. Returns `SG_STATUS_INVARIANT` when a check fails;
/// the report is written either way.
///
/// # Safety
/// `store` must be nul-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_audit(store: *const c_char, out_json: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let store = path_arg(store, "store")?;
        let report = audit_store(&store, &AuditOptions::default())?;
        write_json(out_json, &report)?;
        if report.passed() {
            Ok(())
        } else {
            Err(supergraph::Error::AuditFailed(report.details.join("; ")).into())
        }
    })
}

/// Open the store in `store` keeping at most `cache_leaves` leaves loaded.
///
/// # Safety
/// `store` must be nul-terminated; `out_tree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_tree_open(store: *const c_char, cache_leaves: usize, out_tree: *mut *mut SgTree) -> SgStatus {
    guard(|| {
        let store = path_arg(store, "store")?;
        if out_tree.is_null() {
            return Err(Failure::Null("out_tree"));
        }
        let engine = Engine::open(&store, cache_leaves)?;
        *out_tree = Box::into_raw(Box::new(SgTree { engine }));
        Ok(())
    })
}

/// Close a handle. Null is ignored.
///
/// # Safety
/// `tree` must come from `sg_tree_open` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sg_tree_free(tree: *mut SgTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Tree overview: root, fanout, levels and one summary per node.
///
/// # Safety
/// `tree` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_tree_json(tree: *const SgTree, out_json: *mut *mut c_char) -> SgStatus {
    guard(|| write_json(out_json, &tree_arg(tree)?.engine.tree_view()))
}

/// Graph nodes under tree node `id`.
///
/// # Safety
/// `tree` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_closure_json(tree: *const SgTree, id: u32, out_json: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let view = tree_arg(tree)?.engine.closure(SuperNodeId(id))?;
        write_json(out_json, &view)
    })
}

/// Edges between the closures of tree nodes `a` and `b`.
///
/// # Safety
/// `tree` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_connectivity_json(
    tree: *const SgTree,
    a: u32,
    b: u32,
    out_json: *mut *mut c_char,
) -> SgStatus {
    guard(|| {
        let view = tree_arg(tree)?.engine.connectivity(SuperNodeId(a), SuperNodeId(b))?;
        write_json(out_json, &view)
    })
}

/// Number of edges between the closures of `a` and `b`.
///
/// # Safety
/// `tree` must be a live handle; `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_connectivity_count(tree: *const SgTree, a: u32, b: u32, out_count: *mut u64) -> SgStatus {
    guard(|| {
        if out_count.is_null() {
            return Err(Failure::Null("out_count"));
        }
        let view = tree_arg(tree)?.engine.connectivity(SuperNodeId(a), SuperNodeId(b))?;
        *out_count = view.weight as u64;
        Ok(())
    })
}

/// Neighbors of graph node `node` outside its leaf.
///
/// # Safety
/// `tree` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_external_json(tree: *const SgTree, node: u64, out_json: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let view = tree_arg(tree)?.engine.external(NodeId(node))?;
        write_json(out_json, &view)
    })
}

/// Case-insensitive label substring search.
///
/// # Safety
/// `tree` must be a live handle; `label` nul-terminated; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_search_json(
    tree: *const SgTree,
    label: *const c_char,
    out_json: *mut *mut c_char,
) -> SgStatus {
    guard(|| {
        let label = str_arg(label, "label")?;
        let hits = tree_arg(tree)?.engine.search(label)?;
        write_json(out_json, &hits)
    })
}

/// Load leaf `id` into the cache.
///
/// # Safety
/// `tree` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_leaf_expand(tree: *const SgTree, id: u32) -> SgStatus {
    guard(|| {
        tree_arg(tree)?.engine.expand(SuperNodeId(id))?;
        Ok(())
    })
}

/// Drop leaf `id` from the cache.
///
/// # Safety
/// `tree` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_leaf_collapse(tree: *const SgTree, id: u32) -> SgStatus {
    guard(|| {
        tree_arg(tree)?.engine.collapse(SuperNodeId(id))?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_follow_the_cli_exit_codes() {
        assert_eq!(SgStatus::Invariant as i32, exit::INVARIANT);
        assert_eq!(SgStatus::BadInput as i32, exit::BAD_INPUT);
        assert_eq!(SgStatus::Io as i32, exit::IO);
    }

    #[test]
    fn panics_become_a_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, SgStatus::Panic);
        let msg = unsafe { CStr::from_ptr(sg_last_error()) }.to_str().unwrap();
        assert_eq!(msg, "panic: boom");
        assert_eq!(guard(|| Ok(())), SgStatus::Ok);
        assert!(sg_last_error().is_null());
    }
}
