use rand::Rng;

use super::SimRng;
use crate::error::{Error, Result};

/// A ball urn: drawing colour `c` adds row `c` of `matrix` to the composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Urn {
    pub matrix: Vec<Vec<i64>>,
    pub init: Vec<i64>,
}

/// When the urn process stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UrnStop {
    /// After this many draws.
    Draws(u64),
    /// As soon as the given colour has no balls left.
    Exhausted(usize),
}

impl Urn {
    pub fn new(matrix: Vec<Vec<i64>>, init: Vec<i64>) -> Result<Self> {
        let c = init.len();
        if c == 0 || matrix.len() != c || matrix.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("urn matrix must be square and match the initial composition".into()));
        }
        if init.iter().any(|&x| x < 0) {
            return Err(Error::InvalidInput("initial ball counts must be non-negative".into()));
        }
        Ok(Self { matrix, init })
    }

    /// Sampling without replacement in groups: `alpha·n` white, `delta·m` black.
    pub fn diminishing(n: u64, m: u64, alpha: u64, delta: u64) -> Self {
        Self {
            matrix: vec![vec![-(alpha as i64), 0], vec![0, -(delta as i64)]],
            init: vec![(alpha * n) as i64, (delta * m) as i64],
        }
    }

    /// Balanced triangular urn `((alpha, beta), (0, alpha+beta))`.
    pub fn triangular(w0: u64, b0: u64, alpha: u64, beta: u64) -> Self {
        Self {
            matrix: vec![vec![alpha as i64, beta as i64], vec![0, (alpha + beta) as i64]],
            init: vec![w0 as i64, b0 as i64],
        }
    }

    /// Composition after drawing colour `c` from `state`, or a tenability error.
    pub fn step(&self, state: &[i64], c: usize) -> Result<Vec<i64>> {
        let next: Vec<i64> = state.iter().zip(&self.matrix[c]).map(|(x, d)| x + d).collect();
        if let Some(bad) = next.iter().position(|&x| x < 0) {
            return Err(Error::Tenability(format!(
                "drawing colour {c} from {state:?} leaves {} balls of colour {bad}",
                next[bad]
            )));
        }
        Ok(next)
    }

    pub fn stopped(&self, state: &[i64], draws: u64, stop: UrnStop) -> bool {
        match stop {
            UrnStop::Draws(n) => draws >= n,
            UrnStop::Exhausted(c) => state[c] == 0,
        }
    }
}

/// Runs the urn until `stop`, drawing a ball uniformly at each step.
pub fn sim_urn(urn: &Urn, stop: UrnStop, rng: &mut SimRng) -> Result<Vec<i64>> {
    let mut state = urn.init.clone();
    let mut draws = 0u64;
    while !urn.stopped(&state, draws, stop) {
        let total: i64 = state.iter().sum();
        if total <= 0 {
            return Err(Error::Tenability(format!("urn is empty after {draws} draws")));
        }
        let mut pick = rng.gen_range(0..total as u64) as i64;
        let mut colour = 0;
        for (c, &x) in state.iter().enumerate() {
            if pick < x {
                colour = c;
                break;
            }
            pick -= x;
        }
        state = urn.step(&state, colour)?;
        draws += 1;
    }
    Ok(state)
}
