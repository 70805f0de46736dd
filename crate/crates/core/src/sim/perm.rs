use rand::Rng;

use super::{SimRng, SizeMultiset};

/// A k-Stirling permutation grown by inserting `(i+1)^k` at uniform positions.
pub fn stirling_permutation(n: usize, k: u32, rng: &mut SimRng) -> Vec<u32> {
    let k = k as usize;
    let mut perm: Vec<u32> = Vec::with_capacity(n * k);
    for v in 1..=n as u32 {
        let pos = rng.gen_range(0..=perm.len() as u64) as usize;
        perm.splice(pos..pos, std::iter::repeat(v).take(k));
    }
    perm
}

/// Block sizes of a k-Stirling permutation in units of `k` (distinct values per block).
///
/// A block starting at value `v` ends at the last copy of `v`; nothing inside
/// can reach past it, so a greedy left-to-right scan finds the maximal blocks.
/// For `k = 1` every block is a single letter.
pub fn stirling_blocks(perm: &[u32], k: u32) -> SizeMultiset {
    let max = perm.iter().copied().max().unwrap_or(0) as usize;
    let mut last = vec![0usize; max + 1];
    for (i, &v) in perm.iter().enumerate() {
        last[v as usize] = i;
    }
    let mut blocks = SizeMultiset::new();
    let mut start = 0;
    while start < perm.len() {
        let end = last[perm[start] as usize];
        blocks.add((end - start + 1) / k as usize);
        start = end + 1;
    }
    blocks
}

pub fn sim_kstirling(n: usize, k: u32, rng: &mut SimRng) -> SizeMultiset {
    stirling_blocks(&stirling_permutation(n, k, rng), k)
}
