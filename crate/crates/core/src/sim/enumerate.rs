use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::paths::Step;
use super::tree::{affinity, cayley_from_code};
use super::{
    bridge_visits, count_record_subtrees, edgecut_with_order, mapping_tree_sizes, parking_increments, stirling_blocks,
    tree_stats, LabeledTree, Outcome,
};
use crate::error::{Error, Result};
use crate::exact::{ModelSpec, TreeFamily};
use crate::numerics::falling;
use crate::{Rational, Scalar};

/// Exact law of the outcome: probabilities summing to one.
pub type Distribution = BTreeMap<Outcome, Rational>;

/// Most weighted paths, objects, or histories any enumeration may visit.
pub const ENUMERATION_PATH_CAP: u64 = 100_000;
const MAX_TREE_SIZE: u64 = 6;
const MAX_PERMUTATION_LETTERS: u64 = 15;
const MAX_BRIDGES: u64 = 10_000;

fn cap(what: &str, count: u64, limit: u64) -> Result<()> {
    if count > limit {
        return Err(Error::CapExceeded(format!("{what}: {count} exceeds the enumeration cap {limit}")));
    }
    Ok(())
}

fn checked_pow(base: u64, exp: u64) -> u64 {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base)).unwrap_or(u64::MAX)
}

/// Accumulates weighted outcomes and counts visited paths.
struct Tally {
    dist: Distribution,
    paths: u64,
}

impl Tally {
    fn new() -> Self {
        Self { dist: Distribution::new(), paths: 0 }
    }

    fn add(&mut self, outcome: Outcome, weight: Rational) -> Result<()> {
        self.paths += 1;
        cap("paths", self.paths, ENUMERATION_PATH_CAP)?;
        *self.dist.entry(outcome).or_insert_with(Rational::zero) += weight;
        Ok(())
    }

    /// Rescales uniform counts into probabilities.
    fn normalized(self) -> Distribution {
        let total: Rational = self.dist.values().sum();
        self.dist.into_iter().map(|(o, w)| (o, w / &total)).collect()
    }
}

/// Exact distribution of `spec` by exhaustive enumeration of the underlying
/// objects or process histories, each with its exact probability.
pub fn enumerate_all(spec: &ModelSpec) -> Result<Distribution> {
    spec.validate()?;
    let mut tally = Tally::new();
    match spec {
        ModelSpec::Blocks { n, k, .. } => {
            cap("permutation letters", n * u64::from(*k), MAX_PERMUTATION_LETTERS)?;
            let histories = (0..*n).try_fold(1u64, |acc, i| acc.checked_mul(i * u64::from(*k) + 1)).unwrap_or(u64::MAX);
            cap("permutations", histories, ENUMERATION_PATH_CAP)?;
            stirling_rec(&mut Vec::new(), 1, *n as u32, *k, &mut tally)?;
            return Ok(tally.normalized());
        }
        ModelSpec::Dimurn { n, m, alpha, delta } => {
            let start = [(alpha * n) as i64, (delta * m) as i64];
            dimurn_rec(start, *alpha as i64, *delta as i64, Rational::one(), &mut tally)?;
        }
        ModelSpec::Triangular { n, w0, b0, alpha, beta } => {
            cap("urn histories", checked_pow(2, *n), ENUMERATION_PATH_CAP)?;
            let shape = TriangularShape { alpha: *alpha as i64, beta: *beta as i64, w0: *w0 as i64 };
            triangular_rec(&shape, [*w0 as i64, *b0 as i64], *n, Rational::one(), &mut tally)?;
        }
        ModelSpec::Descendants { n, family, .. } => {
            increasing_trees(spec, family, *n, &mut tally)?;
        }
        ModelSpec::Nodedeg { n, alpha, .. } | ModelSpec::Branches { n, alpha, .. } => {
            increasing_trees(spec, &TreeFamily::Gport(alpha.clone()), *n, &mut tally)?;
        }
        ModelSpec::Crp { n, a, theta, .. } => {
            crp_rec(&mut Vec::new(), *n as usize, a, theta, Rational::one(), &mut tally)?;
        }
        ModelSpec::Inversions { .. } => {
            return Err(Error::InvalidInput("inversions has no combinatorial oracle".into()));
        }
        ModelSpec::Records { n, .. } => {
            cap("tree size", *n, MAX_TREE_SIZE)?;
            for tree in rooted_cayley_trees(*n as usize) {
                tally.add(Outcome::Sizes(count_record_subtrees(&tree)), Rational::one())?;
            }
            return Ok(tally.normalized());
        }
        ModelSpec::Edgecut { n, .. } => {
            cap("tree size", *n, MAX_TREE_SIZE)?;
            return edgecut_distribution(*n as usize);
        }
        ModelSpec::Parking { n, .. } => {
            cap("preference sequences", checked_pow(n + 1, *n), ENUMERATION_PATH_CAP)?;
            for pf in parking_functions(*n as usize) {
                tally.add(Outcome::Sizes(parking_increments(&pf)?), Rational::one())?;
            }
            return Ok(tally.normalized());
        }
        ModelSpec::Bridge { n, .. } => {
            let count = crate::numerics::binomial(2 * n, *n).try_into().unwrap_or(u64::MAX);
            cap("bridges", count, MAX_BRIDGES)?;
            for path in bridges(*n as usize) {
                tally.add(Outcome::Sizes(bridge_visits(&path)?), Rational::one())?;
            }
            return Ok(tally.normalized());
        }
        ModelSpec::Mapping { n, .. } => {
            cap("mappings", checked_pow(*n, *n), ENUMERATION_PATH_CAP)?;
            let n = *n as usize;
            for_each_word(n, n, |f| {
                tally.add(Outcome::Sizes(mapping_tree_sizes(f)), Rational::one())
            })?;
            return Ok(tally.normalized());
        }
    }
    Ok(tally.dist)
}

/// `E[(X)_s]` of the counted statistic under an enumerated distribution.
pub fn falling_moment(dist: &Distribution, spec: &ModelSpec, s: u32) -> Rational {
    dist.iter()
        .map(|(o, p)| falling(&Rational::from_int(o.statistic(spec)), s) * p)
        .sum()
}

fn stirling_rec(perm: &mut Vec<u32>, next: u32, n: u32, k: u32, tally: &mut Tally) -> Result<()> {
    if next > n {
        return tally.add(Outcome::Sizes(stirling_blocks(perm, k)), Rational::one());
    }
    for pos in 0..=perm.len() {
        perm.splice(pos..pos, std::iter::repeat(next).take(k as usize));
        stirling_rec(perm, next + 1, n, k, tally)?;
        perm.drain(pos..pos + k as usize);
    }
    Ok(())
}

fn dimurn_rec(state: [i64; 2], alpha: i64, delta: i64, prob: Rational, tally: &mut Tally) -> Result<()> {
    if state[1] == 0 {
        return tally.add(Outcome::Value(state[0] / alpha), prob);
    }
    let total = Rational::from_int(state[0] + state[1]);
    if state[0] > 0 {
        let p = &prob * Rational::from_int(state[0]) / &total;
        dimurn_rec([state[0] - alpha, state[1]], alpha, delta, p, tally)?;
    }
    let p = &prob * Rational::from_int(state[1]) / &total;
    dimurn_rec([state[0], state[1] - delta], alpha, delta, p, tally)
}

struct TriangularShape {
    alpha: i64,
    beta: i64,
    w0: i64,
}

fn triangular_rec(shape: &TriangularShape, state: [i64; 2], left: u64, prob: Rational, tally: &mut Tally) -> Result<()> {
    if left == 0 {
        return tally.add(Outcome::Value((state[0] - shape.w0) / shape.alpha), prob);
    }
    let total = Rational::from_int(state[0] + state[1]);
    if state[0] > 0 {
        let p = &prob * Rational::from_int(state[0]) / &total;
        triangular_rec(shape, [state[0] + shape.alpha, state[1] + shape.beta], left - 1, p, tally)?;
    }
    if state[1] > 0 {
        let p = &prob * Rational::from_int(state[1]) / &total;
        triangular_rec(shape, [state[0], state[1] + shape.alpha + shape.beta], left - 1, p, tally)?;
    }
    Ok(())
}

fn increasing_trees(spec: &ModelSpec, family: &TreeFamily, n: u64, tally: &mut Tally) -> Result<()> {
    cap("tree size", n, MAX_TREE_SIZE)?;
    let n = n as usize;
    let mut parent = vec![None; n];
    let mut degree = vec![0usize; n];
    grow_rec(spec, family, &mut parent, &mut degree, 1, Rational::one(), tally)
}

fn grow_rec(
    spec: &ModelSpec,
    family: &TreeFamily,
    parent: &mut Vec<Option<usize>>,
    degree: &mut Vec<usize>,
    next: usize,
    prob: Rational,
    tally: &mut Tally,
) -> Result<()> {
    let n = parent.len();
    if next == n {
        let tree = LabeledTree::new(parent.clone(), 1)?;
        let j = match spec {
            ModelSpec::Descendants { j, .. } | ModelSpec::Nodedeg { j, .. } | ModelSpec::Branches { j, .. } => *j as usize,
            _ => unreachable!("only tree models grow increasing trees"),
        };
        let stats = tree_stats(&tree, j, n);
        let outcome = match spec {
            ModelSpec::Descendants { .. } => Outcome::Value(stats.descendants as i64 - 1),
            ModelSpec::Nodedeg { .. } => Outcome::Value(stats.outdegree as i64),
            _ => Outcome::Sizes(stats.branches),
        };
        return tally.add(outcome, prob);
    }
    let weights: Vec<Rational> = (0..next).map(|v| affinity(family, degree[v])).collect();
    let total: Rational = weights.iter().sum();
    for (v, w) in weights.into_iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        parent[next] = Some(v);
        degree[v] += 1;
        grow_rec(spec, family, parent, degree, next + 1, &prob * w / &total, tally)?;
        degree[v] -= 1;
        parent[next] = None;
    }
    Ok(())
}

fn crp_rec(tables: &mut Vec<usize>, left: usize, a: &Rational, theta: &Rational, prob: Rational, tally: &mut Tally) -> Result<()> {
    if left == 0 {
        return tally.add(Outcome::Sizes(super::SizeMultiset::from_sizes(tables.iter().copied())), prob);
    }
    let seated: usize = tables.iter().sum();
    let total = Rational::from_int(seated as i64) + theta;
    for i in 0..tables.len() {
        let w = Rational::from_int(tables[i] as i64) - a;
        tables[i] += 1;
        crp_rec(tables, left - 1, a, theta, &prob * w / &total, tally)?;
        tables[i] -= 1;
    }
    let w = theta + Rational::from_int(tables.len() as i64) * a;
    tables.push(1);
    crp_rec(tables, left - 1, a, theta, &prob * w / &total, tally)?;
    tables.pop();
    Ok(())
}

/// Calls `f` on every word of length `len` over `0..base`.
fn for_each_word(len: usize, base: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let mut word = vec![0usize; len];
    loop {
        f(&word)?;
        let mut i = 0;
        loop {
            if i == len {
                return Ok(());
            }
            word[i] += 1;
            if word[i] < base {
                break;
            }
            word[i] = 0;
            i += 1;
        }
    }
}

/// Every rooted labelled tree on `1..=n`, each exactly once.
pub fn rooted_cayley_trees(n: usize) -> Vec<LabeledTree> {
    let mut trees = Vec::new();
    let _ = for_each_word(n.saturating_sub(2), n, |code| {
        for root in 0..n {
            trees.push(cayley_from_code(n, code, root));
        }
        Ok(())
    });
    trees
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Edge-cut sizes over every tree and every cutting order, all equally likely.
fn edgecut_distribution(n: usize) -> Result<Distribution> {
    let mut tally = Tally::new();
    let orders = permutations(n.saturating_sub(1));
    for tree in rooted_cayley_trees(n) {
        let root = tree.root();
        let edges: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let mut rank = vec![0usize; n];
        let mut local = Distribution::new();
        for order in &orders {
            for (e, &r) in edges.iter().zip(order) {
                rank[*e] = r;
            }
            *local.entry(Outcome::Sizes(edgecut_with_order(&tree, &rank))).or_insert_with(Rational::zero) += Rational::one();
        }
        for (o, w) in local {
            *tally.dist.entry(o).or_insert_with(Rational::zero) += w;
        }
    }
    Ok(tally.normalized())
}

/// Every parking function of length `n`.
pub fn parking_functions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let _ = for_each_word(n, n, |w| {
        let mut sorted: Vec<usize> = w.to_vec();
        sorted.sort_unstable();
        if sorted.iter().enumerate().all(|(i, &x)| x <= i) {
            out.push(w.iter().map(|x| x + 1).collect());
        }
        Ok(())
    });
    out
}

/// Every path with `n` up and `n` down steps.
pub fn bridges(n: usize) -> Vec<Vec<Step>> {
    fn rec(path: &mut Vec<Step>, up: usize, down: usize, out: &mut Vec<Vec<Step>>) {
        if up == 0 && down == 0 {
            out.push(path.clone());
            return;
        }
        for (step, more) in [(Step::Up, up > 0), (Step::Down, down > 0)] {
            if more {
                path.push(step);
                let (u, d) = if step == Step::Up { (up - 1, down) } else { (up, down - 1) };
                rec(path, u, d, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, n, &mut out);
    out
}
