//! Multilevel bisection and k-way partitioning by recursive bisection.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::coarsen::coarsen;
use super::csr::Csr;
use super::initial::initial_bisection;
use super::refine::{fm_refine, force_balance, Bounds};

const COARSEN_TO: usize = 80;
const INITIAL_TRIALS: usize = 8;
const REFINE_PASSES: usize = 10;

/// SplitMix64 finalizer; derives independent child seeds.
pub(crate) fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Largest admissible part size: `⌈(1+ε)·n/k⌉`.
pub(crate) fn balance_cap(n: u64, k: usize, epsilon: f64) -> u64 {
    let exact = (1.0 + epsilon) * n as f64 / k as f64;
    // Guard against 1.1 * 20 / 2 = 11.000000000000002.
    let cap = (exact - 1e-9).ceil().max(0.0) as u64;
    cap.max(n.div_ceil(k as u64))
}

pub(crate) fn multilevel_bisect(g: &Csr, bounds: Bounds, target0: u64, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = coarsen(g, COARSEN_TO, &mut rng);
    let coarsest = levels.last().map(|l| &l.coarse).unwrap_or(g);
    let mut part = initial_bisection(coarsest, bounds, target0, INITIAL_TRIALS, &mut rng);
    for i in (0..levels.len()).rev() {
        let fine = if i == 0 { g } else { &levels[i - 1].coarse };
        part = levels[i].cmap.iter().map(|&c| part[c as usize]).collect();
        fm_refine(fine, &mut part, bounds, REFINE_PASSES);
    }
    force_balance(g, &mut part, bounds);
    part
}

/// Label every vertex of `g` with a part in `0..k`, each part holding at
/// most `cap` vertex weight and at least one vertex.
///
/// Requires `k >= 1`, `g.n() >= k` and `k * cap >= total weight`.
pub(crate) fn recursive_bisection(g: &Csr, k: usize, cap: u64, seed: u64) -> Vec<u32> {
    let n = g.n();
    if k <= 1 || n == 0 {
        return vec![0; n];
    }
    let k0 = k / 2;
    let k1 = k - k0;
    let total = g.total_vwgt();
    let min0 = (k0 as u64).max(total.saturating_sub(k1 as u64 * cap));
    let max0 = (k0 as u64 * cap).min(total - k1 as u64);
    let target0 = ((total as u128 * k0 as u128 + k as u128 / 2) / k as u128) as u64;
    let target0 = target0.clamp(min0, max0.max(min0));
    let bounds = Bounds { min0, max0 };

    let side = multilevel_bisect(g, bounds, target0, derive_seed(seed, 0));
    let mut members: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    for (v, &s) in side.iter().enumerate() {
        members[s as usize].push(v as u32);
    }
    let sub0 = g.induced(&members[0]);
    let sub1 = g.induced(&members[1]);
    let (labels0, labels1) = rayon::join(
        || recursive_bisection(&sub0, k0, cap, derive_seed(seed, 1)),
        || recursive_bisection(&sub1, k1, cap, derive_seed(seed, 2)),
    );
    let mut out = vec![0u32; n];
    for (i, &v) in members[0].iter().enumerate() {
        out[v as usize] = labels0[i];
    }
    for (i, &v) in members[1].iter().enumerate() {
        out[v as usize] = k0 as u32 + labels1[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_is_ceiling() {
        assert_eq!(balance_cap(20, 2, 0.1), 11);
        assert_eq!(balance_cap(60, 3, 0.1), 22);
        assert_eq!(balance_cap(10, 3, 0.0), 4);
        assert_eq!(balance_cap(7, 2, 0.0), 4);
    }

    #[test]
    fn recursive_bisection_respects_cap_and_nonempty() {
        let g = Csr::from_graph(&crate::synth::gnm(103, 400, 8), true);
        for k in [2usize, 3, 5, 7] {
            let cap = balance_cap(103, k, 0.1);
            let labels = recursive_bisection(&g, k, cap, 11);
            let mut sizes = vec![0u64; k];
            for &l in &labels {
                sizes[l as usize] += 1;
            }
            assert!(sizes.iter().all(|&s| s >= 1 && s <= cap), "k={k} sizes={sizes:?}");
        }
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
