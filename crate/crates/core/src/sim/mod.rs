//! Seeded simulators for every model, statistic extractors, and exhaustive
//! enumerators that give exact small-size distributions.

mod enumerate;
mod multiset;
mod paths;
mod perm;
mod restaurant;
mod tree;
mod urn;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use enumerate::{
    bridges, enumerate_all, falling_moment, parking_functions, permutations, rooted_cayley_trees, Distribution,
    ENUMERATION_PATH_CAP,
};
pub use multiset::SizeMultiset;
pub use paths::{
    bridge_visits, mapping_tree_sizes, parking_increments, parking_to_forest, sample_bridge, sample_mapping,
    sample_parking, Step,
};
pub use perm::{sim_kstirling, stirling_blocks, stirling_permutation};
pub use restaurant::sim_crp;
pub use tree::{
    cayley_from_code, count_record_subtrees, edgecut_with_order, forest_record_subtrees, sample_cayley, sim_edgecut,
    record_decomposition, sim_increasing_tree, tree_stats, LabeledTree, TreeStats,
};
pub use urn::{sim_urn, Urn, UrnStop};

use crate::error::{Error, Result};
use crate::exact::{ModelSpec, TreeFamily};
use crate::Scalar;

/// The simulation generator: ChaCha with 8 rounds, addressed by `(seed, stream)`.
pub type SimRng = ChaCha8Rng;

/// Generator for replicate `stream` under `seed`.
pub fn rng(seed: u64, stream: u64) -> SimRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// One realization of a model: either the full size multiset or a single count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Sizes(SizeMultiset),
    Value(i64),
}

impl Outcome {
    /// The counted statistic for the part index of `spec`.
    pub fn statistic(&self, spec: &ModelSpec) -> i64 {
        match self {
            Outcome::Sizes(m) => m.count(spec.part() as usize) as i64,
            Outcome::Value(v) => *v,
        }
    }
}

fn rational_f64(r: &crate::Rational) -> f64 {
    Scalar::to_f64(r)
}

/// Draws one realization of `spec`.
pub fn sample(spec: &ModelSpec, rng: &mut SimRng) -> Result<Outcome> {
    spec.validate()?;
    Ok(match spec {
        ModelSpec::Blocks { n, k, .. } => Outcome::Sizes(sim_kstirling(*n as usize, *k, rng)),
        ModelSpec::Dimurn { n, m, alpha, delta } => {
            let urn = Urn::diminishing(*n, *m, *alpha, *delta);
            let end = sim_urn(&urn, UrnStop::Exhausted(1), rng)?;
            Outcome::Value(end[0] / *alpha as i64)
        }
        ModelSpec::Descendants { n, j, family } => {
            let tree = sim_increasing_tree(family, *n as usize, rng)?;
            Outcome::Value(tree_stats(&tree, *j as usize, 0).descendants as i64 - 1)
        }
        ModelSpec::Nodedeg { n, j, alpha } => {
            let tree = sim_increasing_tree(&TreeFamily::Gport(alpha.clone()), *n as usize, rng)?;
            Outcome::Value(tree_stats(&tree, *j as usize, 0).outdegree as i64)
        }
        ModelSpec::Branches { n, j, alpha, .. } => {
            let tree = sim_increasing_tree(&TreeFamily::Gport(alpha.clone()), *n as usize, rng)?;
            Outcome::Sizes(tree_stats(&tree, *j as usize, *n as usize).branches)
        }
        ModelSpec::Crp { n, a, theta, .. } => {
            Outcome::Sizes(sim_crp(*n as usize, rational_f64(a), rational_f64(theta), rng)?)
        }
        ModelSpec::Triangular { n, w0, b0, alpha, beta } => {
            let urn = Urn::triangular(*w0, *b0, *alpha, *beta);
            let end = sim_urn(&urn, UrnStop::Draws(*n), rng)?;
            Outcome::Value((end[0] - *w0 as i64) / *alpha as i64)
        }
        ModelSpec::Inversions { .. } => {
            return Err(Error::InvalidInput("inversions has no simulator (asymptotic moments only)".into()))
        }
        ModelSpec::Records { n, .. } => Outcome::Sizes(count_record_subtrees(&sample_cayley(*n as usize, rng))),
        ModelSpec::Edgecut { n, .. } => {
            let tree = sample_cayley(*n as usize, rng);
            Outcome::Sizes(sim_edgecut(&tree, rng))
        }
        ModelSpec::Parking { n, .. } => Outcome::Sizes(parking_increments(&sample_parking(*n as usize, rng))?),
        ModelSpec::Bridge { n, .. } => Outcome::Sizes(bridge_visits(&sample_bridge(*n as usize, rng))?),
        ModelSpec::Mapping { n, .. } => Outcome::Sizes(mapping_tree_sizes(&sample_mapping(*n as usize, rng))),
    })
}

/// `replicates` independent realizations, replicate `r` drawn from stream `r`.
/// The result is in replicate order whatever the thread count.
pub fn sample_many(spec: &ModelSpec, replicates: u64, seed: u64) -> Result<Vec<Outcome>> {
    (0..replicates)
        .into_par_iter()
        .map(|r| sample(spec, &mut rng(seed, r)))
        .collect()
}
