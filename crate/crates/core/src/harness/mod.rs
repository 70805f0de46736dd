//! Experiment runner: exact tables, Monte Carlo checks against exact moments,
//! limit-law checks against mixed Poisson laws, and exhaustive oracle checks.

mod config;
mod report;

pub use config::{ConfigFile, ExperimentConfig, Format, Mode, CONFIG_SCHEMA, DEFAULT_REPLICATES, DEFAULT_SMAX, MAX_SMAX};
pub use report::{
    format_sig, Counterexample, ExperimentReport, LimitSummary, OracleSummary, PmfRow, Row, ScaleSummary,
    ScaledMoment, ValueCell, CSV_HEADER, SIGNIFICANT_DIGITS,
};

use crate::error::{Error, Result};
use crate::exact::{ModelSpec, Regime, TreeFamily, REGIME_DEGENERATE, REGIME_INFINITE};
use crate::mixed::MixedPoissonLike;
use crate::numerics::rational;
use crate::sim::{enumerate_all, falling_moment, sample_many, Outcome};
use crate::{MixedPoisson64, Rational};

/// Per-row pass bound on `|z|`.
pub const Z_THRESHOLD: f64 = 4.0;
/// Two-sided normal tail beyond [`Z_THRESHOLD`].
const Z_TAIL: f64 = 6.334e-5;
pub const TV_THRESHOLD: f64 = 0.05;
/// Relative tolerance on scaled moments in the `λ → ∞` regime.
pub const SCALED_MOMENT_TOLERANCE: f64 = 0.05;
/// Above this size reference moments use the double-precision paths.
pub const EXACT_SIZE_LIMIT: u64 = 2000;
/// Largest value tabulated in limit-law PMF comparisons.
const PMF_TABLE_MAX: usize = 400;

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Exact => run_exact(cfg),
        Mode::Mc => run_mc(cfg),
        Mode::LimitCheck => run_limit_check(cfg),
        Mode::OracleCheck => run_oracle_check(cfg),
    }
}

fn base_report(cfg: &ExperimentConfig, random: bool) -> ExperimentReport {
    let scale = cfg.model.scale().ok().map(|info| ScaleSummary {
        lambda: info.lambda,
        lambda_exact: cfg.model.lambda_exact().map(|r| r.to_string()),
        mixing: info.mixing.name(),
        regime: info.regime.to_string(),
    });
    ExperimentReport {
        schema: CONFIG_SCHEMA,
        model: cfg.model.tag().to_string(),
        params: cfg.model.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        mode: cfg.mode,
        seed: random.then_some(cfg.seed),
        replicates: random.then_some(cfg.replicates),
        smax: cfg.smax,
        scale,
        rows: Vec::new(),
        limit: None,
        oracle: None,
        warnings: Vec::new(),
        notes: Vec::new(),
        pass: true,
    }
}

/// The reference factorial moment: exact rational at moderate sizes, the
/// double-precision evaluation for large sizes or beyond the series order.
pub fn reference_moment(spec: &ModelSpec, s: u32) -> Result<ValueCell> {
    if spec.size() <= EXACT_SIZE_LIMIT {
        match spec.factorial_moment(s) {
            Ok(v) => {
                return Ok(match v.exact() {
                    Some(r) => ValueCell::from_rational(r),
                    None => ValueCell::from_f64(v.to_f64()),
                })
            }
            Err(Error::SeriesOrderExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    spec.factorial_moment_f64(s).map(ValueCell::from_f64)
}

fn row(spec: &ModelSpec, s: u32) -> Row {
    Row { model: spec.tag().to_string(), n: spec.size(), j: spec.part(), s, exact: None, estimate: None, stderr: None, z: None }
}

pub fn run_exact(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = base_report(cfg, false);
    for &p in &cfg.parts {
        let spec = cfg.model.with_part(p);
        for s in 0..=cfg.smax {
            let mut r = row(&spec, s);
            r.exact = Some(reference_moment(&spec, s)?);
            report.rows.push(r);
        }
    }
    Ok(report)
}

/// `(x)_s` in floating point.
fn falling_f64(x: i64, s: u32) -> f64 {
    (0..s).map(|i| (x - i64::from(i)) as f64).product()
}

/// Mean and standard error of `values`.
fn mean_stderr(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / count;
    if count < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, (var / count).sqrt())
}

/// Rows comparing empirical factorial moments with reference values.
fn moment_rows(cfg: &ExperimentConfig, outcomes: &[Outcome]) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &p in &cfg.parts {
        let spec = cfg.model.with_part(p);
        let stats: Vec<i64> = outcomes.iter().map(|o| o.statistic(&spec)).collect();
        for s in 1..=cfg.smax {
            let exact = reference_moment(&spec, s)?;
            let (estimate, stderr) = mean_stderr(stats.iter().map(|&x| falling_f64(x, s)));
            let z = if stderr > 0.0 {
                Some((estimate - exact.value) / stderr)
            } else if (estimate - exact.value).abs() <= 1e-12 * exact.value.abs().max(1.0) {
                Some(0.0)
            } else {
                None
            };
            let mut r = row(&spec, s);
            r.exact = Some(exact);
            r.estimate = Some(estimate);
            r.stderr = Some(stderr);
            r.z = z;
            rows.push(r);
        }
    }
    Ok(rows)
}

pub fn run_mc(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = base_report(cfg, true);
    let outcomes = sample_many(&cfg.model, cfg.replicates, cfg.seed)?;
    report.rows = moment_rows(cfg, &outcomes)?;
    report.pass = report.rows.iter().all(|r| r.z.is_some_and(|z| z.abs() <= Z_THRESHOLD));
    let k = report.rows.len();
    report.notes.push(format!(
        "each row passes when |z| <= {Z_THRESHOLD}, a false alarm rate of {Z_TAIL:.2e} per row; by Bonferroni the {k} rows together false-alarm with probability at most {:.2e}",
        Z_TAIL * k as f64
    ));
    Ok(report)
}

/// Total variation between two PMFs on `0..`, shorter tables padded with zeros.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |t: &[f64], i: usize| t.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// Empirical PMF of non-negative counts.
pub fn empirical_pmf(stats: &[i64]) -> Vec<f64> {
    let max = stats.iter().copied().max().unwrap_or(0).max(0) as usize;
    let mut pmf = vec![0.0; max + 1];
    for &x in stats {
        pmf[x.max(0) as usize] += 1.0;
    }
    let total = stats.len() as f64;
    pmf.iter_mut().for_each(|p| *p /= total);
    pmf
}

pub fn run_limit_check(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = base_report(cfg, true);
    let info = cfg.model.scale()?;
    let outcomes = sample_many(&cfg.model, cfg.replicates, cfg.seed)?;
    report.rows = moment_rows(cfg, &outcomes)?;
    let stats: Vec<i64> = outcomes.iter().map(|o| o.statistic(&cfg.model)).collect();
    let lambda = info.lambda;
    if !(lambda > REGIME_DEGENERATE && lambda < REGIME_INFINITE) {
        report.warnings.push(format!(
            "regime mismatch: lambda = {} is outside ({REGIME_DEGENERATE}, {REGIME_INFINITE}), so the {} regime applies instead of a mixed Poisson limit",
            format_sig(lambda, 6),
            info.regime
        ));
    }
    let mut limit = LimitSummary::default();
    match info.regime {
        Regime::FiniteRho => {
            let law = MixedPoisson64::new(info.mixing.clone(), lambda)?;
            let empirical = empirical_pmf(&stats);
            let top = (empirical.len() + 10).min(PMF_TABLE_MAX).max(empirical.len());
            let limit_pmf: Vec<f64> = (0..top).map(|ell| law.pmf(ell)).collect::<Result<_>>()?;
            let tail = (1.0 - limit_pmf.iter().sum::<f64>()).max(0.0);
            let tv = total_variation(&empirical, &limit_pmf) + 0.5 * tail;
            limit.pmf = (0..top)
                .map(|ell| PmfRow { ell, empirical: empirical.get(ell).copied().unwrap_or(0.0), limit: limit_pmf[ell] })
                .collect();
            limit.tv = Some(tv);
            report.pass = tv <= TV_THRESHOLD;
            report.notes.push(format!("passes when total variation <= {TV_THRESHOLD}"));
        }
        Regime::ToInfinity => {
            for s in 1..=2u32 {
                let empirical = stats.iter().map(|&x| (x as f64 / lambda).powi(s as i32)).sum::<f64>() / stats.len() as f64;
                let mixing = info.mixing.moment(s as usize);
                limit.scaled_moments.push(ScaledMoment { s, empirical, mixing, ratio: empirical / mixing });
            }
            report.pass = limit.scaled_moments.iter().all(|m| (m.ratio - 1.0).abs() <= SCALED_MOMENT_TOLERANCE);
            report.notes.push(format!(
                "passes when E (X/lambda)^s is within {}% of the mixing moment for s = 1, 2",
                SCALED_MOMENT_TOLERANCE * 100.0
            ));
        }
        Regime::Degenerate => {
            let zero = stats.iter().filter(|&&x| x == 0).count() as f64 / stats.len() as f64;
            let mean = reference_moment(&cfg.model, 1)?.value;
            let r = cfg.replicates as f64;
            let slack = Z_THRESHOLD * (mean.max(1.0 / r) / r).sqrt();
            limit.mass_at_zero = Some(zero);
            report.pass = 1.0 - zero <= mean + slack;
            report.notes.push("passes when P(X > 0) stays below the Markov bound E X plus sampling slack".into());
        }
    }
    report.limit = Some(limit);
    Ok(report)
}

/// Compares exact moments with enumerated expectations for the given parts;
/// stops at the first disagreement.
pub fn oracle_compare(model: &ModelSpec, parts: &[u64], smax: u32) -> Result<(Vec<Row>, OracleSummary)> {
    let per_part = matches!(model, ModelSpec::Descendants { .. } | ModelSpec::Nodedeg { .. });
    let shared = if per_part { None } else { Some(enumerate_all(model)?) };
    let mut rows = Vec::new();
    let mut summary = OracleSummary { comparisons: 0, counterexample: None };
    for &p in parts {
        let spec = model.with_part(p);
        let own;
        let dist = match &shared {
            Some(d) => d,
            None => {
                own = enumerate_all(&spec)?;
                &own
            }
        };
        for s in 1..=smax {
            let exact = spec
                .factorial_moment(s)?
                .exact()
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("{} has no exact moments to check", spec.tag())))?;
            let oracle = falling_moment(dist, &spec, s);
            summary.comparisons += 1;
            let mut r = row(&spec, s);
            r.exact = Some(ValueCell::from_rational(&exact));
            r.estimate = Some(ValueCell::from_rational(&oracle).value);
            rows.push(r);
            if exact != oracle {
                summary.counterexample = Some(Counterexample { j: p, s, exact: exact.to_string(), oracle: oracle.to_string() });
                return Ok((rows, summary));
            }
        }
    }
    Ok((rows, summary))
}

pub fn run_oracle_check(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = base_report(cfg, false);
    let (rows, summary) = oracle_compare(&cfg.model, &cfg.parts, cfg.smax)?;
    report.rows = rows;
    report.pass = summary.counterexample.is_none();
    report.oracle = Some(summary);
    Ok(report)
}

/// Small instances of every model with an exhaustive oracle; sweep
/// [`ModelSpec::parts`] on each for full coverage.
pub fn oracle_suite() -> Vec<ModelSpec> {
    let one = || Rational::from_integer(1.into());
    let mut suite = Vec::new();
    for n in 1..=4 {
        suite.push(ModelSpec::Blocks { n, k: 2, ell: 1 });
    }
    for (alpha, delta) in [(1, 1), (2, 1), (1, 2)] {
        for n in 0..=4 {
            for m in 0..=4 {
                suite.push(ModelSpec::Dimurn { n, m, alpha, delta });
            }
        }
    }
    for family in [TreeFamily::Rect, TreeFamily::Gport(one()), TreeFamily::Dary(2)] {
        for n in 1..=5 {
            suite.push(ModelSpec::Descendants { n, j: 1, family: family.clone() });
        }
    }
    for n in 2..=5 {
        suite.push(ModelSpec::Nodedeg { n, j: 2, alpha: one() });
        for j in 1..n {
            suite.push(ModelSpec::Branches { n, j, k: 1, alpha: one() });
        }
    }
    for n in 1..=4 {
        suite.push(ModelSpec::Crp { n, j: 1, a: rational(1, 2), theta: rational(1, 2) });
    }
    for (alpha, beta, w0, b0) in TRIANGULAR_ORACLE_SET {
        for n in 0..=5 {
            suite.push(ModelSpec::Triangular { n, w0, b0, alpha, beta });
        }
    }
    for n in 1..=5 {
        suite.push(ModelSpec::Records { n, j: 1 });
        suite.push(ModelSpec::Parking { n, j: 1 });
        suite.push(ModelSpec::Mapping { n, j: 1 });
        if n >= 2 {
            suite.push(ModelSpec::Edgecut { n, j: 1 });
        }
    }
    for n in 1..=6 {
        suite.push(ModelSpec::Bridge { n, j: 1 });
    }
    suite
}

/// `(alpha, beta, w0, b0)` triangular urns small enough to enumerate.
pub const TRIANGULAR_ORACLE_SET: [(u64, u64, u64, u64); 5] = [(1, 1, 1, 1), (2, 1, 1, 1), (1, 2, 1, 2), (1, 1, 2, 0), (3, 2, 2, 3)];

#[cfg(test)]
mod tests;
