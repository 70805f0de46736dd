use rand::seq::SliceRandom;
use rand::Rng;

use super::{LabeledTree, SimRng, SizeMultiset};
use crate::error::{Error, Result};

/// Uniform parking function of length `n` with preferences in `1..=n`.
///
/// Drivers park on a circle of `n+1` spaces with uniform preferences; exactly
/// one space stays free, and rotating it to position `n+1` gives a parking
/// function. Each parking function arises from `n+1` circular sequences.
pub fn sample_parking(n: usize, rng: &mut SimRng) -> Vec<usize> {
    let spaces = n + 1;
    let prefs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..spaces as u64) as usize).collect();
    let mut taken = vec![false; spaces];
    for &p in &prefs {
        let mut s = p;
        while taken[s] {
            s = (s + 1) % spaces;
        }
        taken[s] = true;
    }
    let empty = taken.iter().position(|t| !t).expect("one space stays free");
    prefs.iter().map(|&p| (p + spaces - empty - 1) % spaces + 1).collect()
}

/// Space where each driver parks, or an error if some driver falls off the end.
fn park(pf: &[usize]) -> Result<Vec<usize>> {
    let n = pf.len();
    let mut occupied = vec![false; n + 2];
    let mut spots = Vec::with_capacity(n);
    for (k, &pref) in pf.iter().enumerate() {
        if pref == 0 || pref > n {
            return Err(Error::InvalidInput(format!("driver {} prefers space {pref}, outside 1..={n}", k + 1)));
        }
        let mut s = pref;
        while s <= n && occupied[s] {
            s += 1;
        }
        if s > n {
            return Err(Error::InvalidInput(format!("{pf:?} is not a parking function: driver {} cannot park", k + 1)));
        }
        occupied[s] = true;
        spots.push(s);
    }
    Ok(spots)
}

/// Amounts by which the initial cluster (the occupied run from space 1) grows.
pub fn parking_increments(pf: &[usize]) -> Result<SizeMultiset> {
    let n = pf.len();
    let spots = park(pf)?;
    let mut occupied = vec![false; n + 2];
    let mut cluster = 0;
    let mut increments = SizeMultiset::new();
    for s in spots {
        occupied[s] = true;
        let before = cluster;
        while occupied[cluster + 1] {
            cluster += 1;
        }
        if cluster > before {
            increments.add(cluster - before);
        }
    }
    Ok(increments)
}

/// The forest of a parking function, stored as a tree on labels `0..=n` whose
/// root 0 is virtual: the children of 0 are the roots of the forest.
///
/// Driver `k` becomes node `k`. The trees holding the cluster just right of
/// its space become subtrees of `k`; if `k` was displaced from its preferred
/// space, `k` then hangs below the driver who occupied that space.
pub fn parking_to_forest(pf: &[usize]) -> Result<LabeledTree> {
    let n = pf.len();
    let spots = park(pf)?;
    let mut driver_at = vec![0usize; n + 2];
    let mut parent: Vec<Option<usize>> = vec![None; n + 1];
    let root_of = |parent: &[Option<usize>], mut v: usize| {
        while let Some(p) = parent[v] {
            v = p;
        }
        v
    };
    for (i, &s) in spots.iter().enumerate() {
        let k = i + 1;
        let mut right = s + 1;
        while right <= n && driver_at[right] != 0 {
            let g = root_of(&parent, driver_at[right]);
            if g != k {
                parent[g] = Some(k);
            }
            right += 1;
        }
        if s != pf[i] {
            parent[k] = Some(driver_at[pf[i]]);
        }
        driver_at[s] = k;
    }
    for p in parent.iter_mut().skip(1) {
        if p.is_none() {
            *p = Some(0);
        }
    }
    LabeledTree::new(parent, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Up,
    Down,
}

/// Uniform bridge with `n` up and `n` down steps.
pub fn sample_bridge(n: usize, rng: &mut SimRng) -> Vec<Step> {
    let mut path: Vec<Step> = std::iter::repeat(Step::Up).take(n).chain(std::iter::repeat(Step::Down).take(n)).collect();
    path.shuffle(rng);
    path
}

/// Half-lengths of the excursions between successive returns to zero.
pub fn bridge_visits(path: &[Step]) -> Result<SizeMultiset> {
    let mut height = 0i64;
    let mut last_zero = 0usize;
    let mut arches = SizeMultiset::new();
    for (i, step) in path.iter().enumerate() {
        height += if *step == Step::Up { 1 } else { -1 };
        if height == 0 {
            arches.add((i + 1 - last_zero) / 2);
            last_zero = i + 1;
        }
    }
    if height != 0 {
        return Err(Error::InvalidInput(format!("path ends at height {height}, not a bridge")));
    }
    Ok(arches)
}

/// Uniform map from `0..n` to itself.
pub fn sample_mapping(n: usize, rng: &mut SimRng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n as u64) as usize).collect()
}

/// Sizes of the trees hanging at the cyclic points of a mapping, roots included.
pub fn mapping_tree_sizes(f: &[usize]) -> SizeMultiset {
    let n = f.len();
    let mut indegree = vec![0usize; n];
    for &y in f {
        indegree[y] += 1;
    }
    // Peeling leaves removes exactly the non-cyclic points.
    let mut peeled: Vec<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
    let mut cursor = 0;
    while cursor < peeled.len() {
        let y = f[peeled[cursor]];
        indegree[y] -= 1;
        if indegree[y] == 0 {
            peeled.push(y);
        }
        cursor += 1;
    }
    let mut root: Vec<usize> = (0..n).collect();
    for &x in peeled.iter().rev() {
        root[x] = root[f[x]];
    }
    let mut sizes = vec![0usize; n];
    for &r in &root {
        sizes[r] += 1;
    }
    SizeMultiset::from_sizes(sizes.into_iter().filter(|&s| s > 0))
}
