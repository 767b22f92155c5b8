use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;
use serde::Serialize;

use super::{SuperEdge, SuperNodeId, TreeError};
use crate::graph::Graph;

pub const DEFAULT_CACHE_LEAVES: usize = 32;

/// A leaf's induced subgraph: members, labels and internal edges.
#[derive(Debug, Clone)]
pub struct LeafSubgraph {
    pub leaf: SuperNodeId,
    pub graph: Graph,
}

impl LeafSubgraph {
    /// The leaf's internal SuperEdge (both sides are the leaf itself).
    pub fn internal_superedge(&self) -> SuperEdge {
        SuperEdge {
            side_a: self.leaf,
            side_b: self.leaf,
            edges: self.graph.edges().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub capacity: usize,
    pub resident: usize,
    /// Highest number of simultaneously resident leaves seen so far.
    pub peak: usize,
    pub loads: u64,
}

#[derive(Debug, Default)]
struct State {
    entries: HashMap<SuperNodeId, (Arc<LeafSubgraph>, u64)>,
    clock: u64,
    peak: usize,
    loads: u64,
}

/// LRU cache of loaded leaves. Loads happen under the lock, so a leaf is
/// never visible before it is complete.
#[derive(Debug)]
pub(crate) struct LeafCache {
    capacity: usize,
    state: Mutex<State>,
}

impl LeafCache {
    pub fn new(capacity: usize) -> Self {
        LeafCache {
            capacity: capacity.max(1),
            state: Mutex::new(State::default()),
        }
    }

    pub fn get_or_load<F>(&self, id: SuperNodeId, load: F) -> Result<Arc<LeafSubgraph>, TreeError>
    where
        F: FnOnce() -> Result<LeafSubgraph, TreeError>,
    {
        let mut st = self.state.lock();
        st.clock += 1;
        let now = st.clock;
        if let Some((leaf, tick)) = st.entries.get_mut(&id) {
            *tick = now;
            return Ok(leaf.clone());
        }
        let loaded = Arc::new(load()?);
        while st.entries.len() >= self.capacity {
            let oldest = st
                .entries
                .iter()
                .min_by_key(|(id, (_, tick))| (*tick, **id))
                .map(|(id, _)| *id)
                .expect("non-empty cache");
            st.entries.remove(&oldest);
        }
        st.entries.insert(id, (loaded.clone(), now));
        st.loads += 1;
        st.peak = st.peak.max(st.entries.len());
        Ok(loaded)
    }

    pub fn release(&self, id: SuperNodeId) -> bool {
        self.state.lock().entries.remove(&id).is_some()
    }

    pub fn peek(&self, id: SuperNodeId) -> Option<Arc<LeafSubgraph>> {
        self.state.lock().entries.get(&id).map(|(l, _)| l.clone())
    }

    pub fn stats(&self) -> CacheStats {
        let st = self.state.lock();
        CacheStats {
            capacity: self.capacity,
            resident: st.entries.len(),
            peak: st.peak,
            loads: st.loads,
        }
    }

    pub fn set_capacity(&mut self, capacity: usize) {
        self.capacity = capacity.max(1);
        let st = self.state.get_mut();
        while st.entries.len() > self.capacity {
            let oldest = st
                .entries
                .iter()
                .min_by_key(|(id, (_, tick))| (*tick, **id))
                .map(|(id, _)| *id)
                .expect("non-empty cache");
            st.entries.remove(&oldest);
        }
    }
}
