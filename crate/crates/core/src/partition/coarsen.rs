//! Heavy-edge matching coarsening.

use rand::seq::SliceRandom;
use rand::Rng;

use super::csr::Csr;

pub(crate) struct Level {
    pub coarse: Csr,
    /// Fine vertex -> coarse vertex.
    pub cmap: Vec<u32>,
}

/// Contract `g` repeatedly until it has at most `coarsen_to` vertices or a
/// round shrinks it by less than 5%. `levels[0]` is built from `g`.
pub(crate) fn coarsen<R: Rng>(g: &Csr, coarsen_to: usize, rng: &mut R) -> Vec<Level> {
    let total = g.total_vwgt();
    let max_vwgt = ((1.5 * total as f64) / coarsen_to.max(1) as f64).ceil().max(1.0) as u32;
    let mut levels: Vec<Level> = Vec::new();
    loop {
        let current = levels.last().map(|l| &l.coarse).unwrap_or(g);
        let n = current.n();
        if n <= coarsen_to {
            break;
        }
        let (cmap, cn) = heavy_edge_matching(current, max_vwgt, rng);
        if cn as f64 > 0.95 * n as f64 {
            break;
        }
        let coarse = contract(current, &cmap, cn);
        levels.push(Level { coarse, cmap });
    }
    levels
}

fn heavy_edge_matching<R: Rng>(g: &Csr, max_vwgt: u32, rng: &mut R) -> (Vec<u32>, usize) {
    let n = g.n();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut mate = vec![u32::MAX; n];
    for &v in &order {
        let v = v as usize;
        if mate[v] != u32::MAX {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (u, w) in g.neighbors(v) {
            if mate[u] != u32::MAX || u == v || g.vwgt[u] + g.vwgt[v] > max_vwgt {
                continue;
            }
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((u, w));
            }
        }
        match best {
            Some((u, _)) => {
                mate[v] = u as u32;
                mate[u] = v as u32;
            }
            None => mate[v] = v as u32,
        }
    }
    let mut cmap = vec![u32::MAX; n];
    let mut cn = 0u32;
    for v in 0..n {
        if cmap[v] == u32::MAX {
            cmap[v] = cn;
            cmap[mate[v] as usize] = cn;
            cn += 1;
        }
    }
    (cmap, cn as usize)
}

fn contract(g: &Csr, cmap: &[u32], cn: usize) -> Csr {
    let mut members: Vec<Vec<u32>> = vec![Vec::with_capacity(2); cn];
    for (v, &c) in cmap.iter().enumerate() {
        members[c as usize].push(v as u32);
    }
    let mut xadj = Vec::with_capacity(cn + 1);
    let mut adjncy = Vec::new();
    let mut adjwgt = Vec::new();
    let mut vwgt = vec![0u32; cn];
    // Dense accumulator: slot[c] is the position of coarse neighbor c in the
    // row being built, or usize::MAX.
    let mut slot = vec![usize::MAX; cn];
    xadj.push(0);
    for c in 0..cn {
        let row_start = adjncy.len();
        for &v in &members[c] {
            vwgt[c] += g.vwgt[v as usize];
            for (u, w) in g.neighbors(v as usize) {
                let cu = cmap[u] as usize;
                if cu == c {
                    continue;
                }
                if slot[cu] == usize::MAX {
                    slot[cu] = adjncy.len();
                    adjncy.push(cu as u32);
                    adjwgt.push(w);
                } else {
                    adjwgt[slot[cu]] += w;
                }
            }
        }
        for &cu in &adjncy[row_start..] {
            slot[cu as usize] = usize::MAX;
        }
        xadj.push(adjncy.len());
    }
    Csr {
        xadj,
        adjncy,
        adjwgt,
        vwgt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coarsening_preserves_weight_and_cut_structure() {
        let g = crate::synth::gnm(200, 600, 1);
        let csr = Csr::from_graph(&g, true);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let levels = coarsen(&csr, 20, &mut rng);
        assert!(!levels.is_empty());
        let mut prev_edge_weight: f64 = csr.adjwgt.iter().sum();
        for l in &levels {
            assert_eq!(l.coarse.total_vwgt(), 200);
            let ew: f64 = l.coarse.adjwgt.iter().sum();
            assert!(ew <= prev_edge_weight + 1e-9);
            prev_edge_weight = ew;
            // adjacency symmetric
            for v in 0..l.coarse.n() {
                for (u, w) in l.coarse.neighbors(v) {
                    assert_ne!(u, v);
                    let back: f64 = l.coarse.neighbors(u).filter(|&(x, _)| x == v).map(|(_, w)| w).sum();
                    assert_eq!(back, w);
                }
            }
        }
    }

    #[test]
    fn projected_cut_equals_coarse_cut() {
        let g: Graph = crate::synth::gnm(100, 300, 2);
        let csr = Csr::from_graph(&g, true);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let levels = coarsen(&csr, 10, &mut rng);
        let l = &levels[0];
        let coarse_part: Vec<u32> = (0..l.coarse.n() as u32).map(|c| c % 2).collect();
        let fine_part: Vec<u32> = l.cmap.iter().map(|&c| coarse_part[c as usize]).collect();
        assert_eq!(csr.cut(&fine_part), l.coarse.cut(&coarse_part));
    }
}
