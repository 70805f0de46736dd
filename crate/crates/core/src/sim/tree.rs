use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{SimRng, SizeMultiset};
use crate::error::{Error, Result};
use crate::exact::TreeFamily;
use crate::Scalar;

/// A rooted tree on nodes `0..size`; node `i` carries label `first_label + i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledTree {
    parent: Vec<Option<usize>>,
    first_label: usize,
}

impl LabeledTree {
    /// Checks that there is exactly one root and no cycle.
    pub fn new(parent: Vec<Option<usize>>, first_label: usize) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidInput("a tree needs at least one node".into()));
        }
        if parent.iter().filter(|p| p.is_none()).count() != 1 {
            return Err(Error::InvalidInput("a tree needs exactly one root".into()));
        }
        if parent.iter().flatten().any(|&p| p >= n) {
            return Err(Error::InvalidInput("parent index out of range".into()));
        }
        let tree = Self { parent, first_label };
        if tree.preorder().len() != n {
            return Err(Error::InvalidInput("parent map has a cycle".into()));
        }
        Ok(tree)
    }

    pub fn size(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn label(&self, v: usize) -> usize {
        self.first_label + v
    }

    pub fn first_label(&self) -> usize {
        self.first_label
    }

    pub fn root(&self) -> usize {
        self.parent.iter().position(|p| p.is_none()).expect("validated tree has a root")
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.size()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(v);
            }
        }
        ch
    }

    /// Nodes in depth-first preorder from the root.
    pub fn preorder(&self) -> Vec<usize> {
        let ch = self.children();
        let mut order = Vec::with_capacity(self.size());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(ch[v].iter().rev());
        }
        order
    }

    /// Number of nodes in the subtree of each node.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1usize; self.size()];
        for &v in self.preorder().iter().rev() {
            if let Some(p) = self.parent[v] {
                sizes[p] += sizes[v];
            }
        }
        sizes
    }
}

/// Decomposition into record subtrees under `key`: a node is a record when its
/// key is below every key on its path from the root; each node belongs to its
/// nearest record ancestor. With `count_root = false` the root is left out and
/// its children start fresh (edge records, or forests hung from a virtual root).
pub fn record_decomposition(tree: &LabeledTree, key: impl Fn(usize) -> u64, count_root: bool) -> SizeMultiset {
    let n = tree.size();
    let root = tree.root();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut path_min = vec![u64::MAX; n];
    let mut sizes = vec![0usize; n];
    for v in tree.preorder() {
        let (inherited_min, inherited_owner) = match tree.parent(v) {
            Some(p) if p != root || count_root => (path_min[p], owner[p]),
            _ => (u64::MAX, None),
        };
        if v == root && !count_root {
            continue;
        }
        let k = key(v);
        if k < inherited_min {
            owner[v] = Some(v);
            path_min[v] = k;
        } else {
            owner[v] = inherited_owner;
            path_min[v] = inherited_min;
        }
        if let Some(o) = owner[v] {
            sizes[o] += 1;
        }
    }
    SizeMultiset::from_sizes(sizes.into_iter().filter(|&s| s > 0))
}

/// Min-record subtree sizes of a labelled tree.
pub fn count_record_subtrees(tree: &LabeledTree) -> SizeMultiset {
    record_decomposition(tree, |v| tree.label(v) as u64, true)
}

/// Max-record subtree sizes of a forest stored with a virtual root (the root
/// node is skipped, its children are the component roots).
pub fn forest_record_subtrees(forest: &LabeledTree) -> SizeMultiset {
    let top = forest.size() as u64;
    record_decomposition(forest, |v| top - forest.label(v) as u64, false)
}

/// Cut sizes when edges (named by their child node) are cut in increasing
/// `rank`, skipping edges already discarded.
pub fn edgecut_with_order(tree: &LabeledTree, rank: &[usize]) -> SizeMultiset {
    record_decomposition(tree, |v| rank[v] as u64, false)
}

/// Cut sizes of the uniform random edge-cutting procedure; cutting a uniform
/// remaining edge is the same as following a uniform order of all edges.
pub fn sim_edgecut(tree: &LabeledTree, rng: &mut SimRng) -> SizeMultiset {
    let mut rank: Vec<usize> = (0..tree.size()).collect();
    rank.shuffle(rng);
    edgecut_with_order(tree, &rank)
}

/// Uniform rooted Cayley tree on labels `1..=n`: a uniform code of length
/// `n-2` decoded to an unrooted tree, then a uniform root.
pub fn sample_cayley(n: usize, rng: &mut SimRng) -> LabeledTree {
    let code: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n as u64) as usize).collect();
    let root = rng.gen_range(0..n as u64) as usize;
    cayley_from_code(n, &code, root)
}

/// Decodes a Prüfer code over `0..n` and roots the tree at `root`.
pub fn cayley_from_code(n: usize, code: &[usize], root: usize) -> LabeledTree {
    let mut adj = vec![Vec::new(); n];
    if n >= 2 {
        let mut degree = vec![1usize; n];
        for &c in code {
            degree[c] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        for &c in code {
            let Reverse(leaf) = leaves.pop().expect("a code always leaves a leaf");
            adj[leaf].push(c);
            adj[c].push(leaf);
            degree[c] -= 1;
            if degree[c] == 1 {
                leaves.push(Reverse(c));
            }
        }
        let Reverse(u) = leaves.pop().expect("two leaves remain");
        let Reverse(v) = leaves.pop().expect("two leaves remain");
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                stack.push(w);
            }
        }
    }
    LabeledTree { parent, first_label: 1 }
}

/// Fenwick tree over attachment weights.
struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self { tree: vec![0.0; n + 1] }
    }

    fn add(&mut self, i: usize, delta: f64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose prefix sum exceeds `target`.
    fn find(&self, mut target: f64, used: usize) -> usize {
        let mut pos = 0;
        let mut step = self.tree.len().next_power_of_two() / 2;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step /= 2;
        }
        pos.min(used - 1)
    }
}

/// Affinity of a node with outdegree `deg` in `family`.
pub(crate) fn affinity<T: Scalar>(family: &TreeFamily, deg: usize) -> T {
    match family {
        TreeFamily::Rect => T::one(),
        TreeFamily::Gport(alpha) => T::from_rational(alpha) + T::from_int(deg as i64),
        TreeFamily::Dary(d) => T::from_int(i64::from(*d) - deg as i64),
    }
}

/// Grows an increasing tree of size `n`: node `i+1` attaches to `v` with
/// probability proportional to the affinity of `v`.
pub fn sim_increasing_tree(family: &TreeFamily, n: usize, rng: &mut SimRng) -> Result<LabeledTree> {
    if n == 0 {
        return Err(Error::InvalidInput("tree size must be at least 1".into()));
    }
    let mut parent = vec![None; n];
    let mut degree = vec![0usize; n];
    let mut weights = Fenwick::new(n);
    let mut total = affinity::<f64>(family, 0);
    weights.add(0, total);
    for v in 1..n {
        let target = rng.gen::<f64>() * total;
        let p = weights.find(target, v);
        parent[v] = Some(p);
        let before: f64 = affinity(family, degree[p]);
        degree[p] += 1;
        let after: f64 = affinity(family, degree[p]);
        weights.add(p, after - before);
        let fresh: f64 = affinity(family, 0);
        weights.add(v, fresh);
        total += after - before + fresh;
    }
    Ok(LabeledTree { parent, first_label: 1 })
}

/// Per-node statistics of an increasing tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeStats {
    /// Size of the subtree of the node, the node included.
    pub descendants: usize,
    pub outdegree: usize,
    /// Sizes of the subtrees hanging from the node, up to the requested cap.
    pub branches: SizeMultiset,
}

/// Statistics of the node labelled `j`; branch sizes above `kmax` are dropped.
pub fn tree_stats(tree: &LabeledTree, j: usize, kmax: usize) -> TreeStats {
    let v = j - tree.first_label();
    let sizes = tree.subtree_sizes();
    let kids: Vec<usize> = (0..tree.size()).filter(|&w| tree.parent(w) == Some(v)).collect();
    TreeStats {
        descendants: sizes[v],
        outdegree: kids.len(),
        branches: SizeMultiset::from_sizes(kids.iter().map(|&w| sizes[w])).capped(kmax),
    }
}
