use crate::graph::Graph;

/// Compressed adjacency with vertex weights, the working form of every
/// partitioning phase. Vertex weights count original nodes.
#[derive(Debug, Clone)]
pub(crate) struct Csr {
    pub xadj: Vec<usize>,
    pub adjncy: Vec<u32>,
    pub adjwgt: Vec<f64>,
    pub vwgt: Vec<u32>,
}

impl Csr {
    pub fn from_graph(g: &Graph, weighted: bool) -> Csr {
        let n = g.node_count();
        let mut xadj = Vec::with_capacity(n + 1);
        let mut adjncy = Vec::new();
        let mut adjwgt = Vec::new();
        xadj.push(0);
        for i in 0..n {
            for (j, e) in g.neighbors_dense(i) {
                adjncy.push(j as u32);
                adjwgt.push(if weighted { e.weight } else { 1.0 });
            }
            xadj.push(adjncy.len());
        }
        Csr {
            xadj,
            adjncy,
            adjwgt,
            vwgt: vec![1; n],
        }
    }

    pub fn n(&self) -> usize {
        self.vwgt.len()
    }

    pub fn total_vwgt(&self) -> u64 {
        self.vwgt.iter().map(|&w| w as u64).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.xadj[v]..self.xadj[v + 1]).map(move |i| (self.adjncy[i] as usize, self.adjwgt[i]))
    }

    /// Subgraph induced by `members` (local index `i` ↔ `members[i]`).
    pub fn induced(&self, members: &[u32]) -> Csr {
        let mut local = vec![u32::MAX; self.n()];
        for (i, &v) in members.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut xadj = Vec::with_capacity(members.len() + 1);
        let mut adjncy = Vec::new();
        let mut adjwgt = Vec::new();
        xadj.push(0);
        for &v in members {
            for (u, w) in self.neighbors(v as usize) {
                let lu = local[u];
                if lu != u32::MAX {
                    adjncy.push(lu);
                    adjwgt.push(w);
                }
            }
            xadj.push(adjncy.len());
        }
        Csr {
            xadj,
            adjncy,
            adjwgt,
            vwgt: members.iter().map(|&v| self.vwgt[v as usize]).collect(),
        }
    }

    /// Total weight of edges whose endpoints carry different labels.
    pub fn cut(&self, part: &[u32]) -> f64 {
        let mut cut = 0.0;
        for v in 0..self.n() {
            for (u, w) in self.neighbors(v) {
                if u > v && part[u] != part[v] {
                    cut += w;
                }
            }
        }
        cut
    }
}
