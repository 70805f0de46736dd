use rand::Rng;

use super::{SimRng, SizeMultiset};
use crate::error::{Error, Result};

/// Table sizes after `n` customers of the Chinese restaurant process with
/// discount `a` and strength `theta`.
pub fn sim_crp(n: usize, a: f64, theta: f64, rng: &mut SimRng) -> Result<SizeMultiset> {
    if !(a > 0.0 && a < 1.0) || theta <= -a {
        return Err(Error::Domain(format!("restaurant needs 0 < a < 1 and theta > -a, got a = {a}, theta = {theta}")));
    }
    let mut tables: Vec<usize> = Vec::new();
    for seated in 0..n {
        // Joining table i has weight |t_i| - a, a new table theta + k a.
        let total = seated as f64 + theta;
        let mut u = rng.gen::<f64>() * total;
        let mut chosen = None;
        for (i, &size) in tables.iter().enumerate() {
            let w = size as f64 - a;
            if u < w {
                chosen = Some(i);
                break;
            }
            u -= w;
        }
        match chosen {
            Some(i) => tables[i] += 1,
            None => tables.push(1),
        }
    }
    Ok(SizeMultiset::from_sizes(tables))
}
