//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mixpois::exact::{triangular_fm, triangular_rising_fm, ModelSpec, Params, TreeFamily};
use mixpois::harness::{oracle_compare, oracle_suite, run, ExperimentConfig, Mode, TRIANGULAR_ORACLE_SET};
use mixpois::laws::MixingLaw;
use mixpois::mixed::MixedPoissonLike;
use mixpois::numerics::{bell, gen_binomial, rational, rising};
use mixpois::sim::{
    enumerate_all, forest_record_subtrees, parking_functions, parking_increments, parking_to_forest, Outcome,
};
use mixpois::transforms::{inverse_stirling_transform, stirling_transform, MomentKind, MomentSeq};
use mixpois::{MixedPoisson64, Rational};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Number of set partitions of an `n`-set, by listing restricted growth strings.
fn count_set_partitions(n: usize) -> u64 {
    fn rec(pos: usize, n: usize, blocks: usize) -> u64 {
        if pos == n {
            return 1;
        }
        (0..=blocks).map(|b| rec(pos + 1, n, blocks.max(b + 1))).sum()
    }
    if n == 0 {
        1
    } else {
        rec(1, n, 1)
    }
}

fn criterion_1() -> Verdict {
    let ones = MomentSeq::from_fn(MomentKind::Falling, None, |_| int(1));
    let bells = stirling_transform(&ones, &int(1), 6).map_err(|e| e.to_string())?;
    for s in 1..=6usize {
        let got = bells.get(s).map_err(|e| e.to_string())?;
        let brute = int(count_set_partitions(s) as i64);
        ensure(got == brute && Rational::from_integer(bell(s)) == brute, || {
            format!("s={s}: transform {got}, enumeration {brute}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draw = |rng: &mut ChaCha8Rng| rational(rng.gen_range(-50..=50), rng.gen_range(1..=20));
    for case in 0..100 {
        let values: Vec<Rational> = (0..10).map(|_| draw(&mut rng)).collect();
        let mut rho = draw(&mut rng);
        if rho == int(0) {
            rho = int(3);
        }
        let seq = MomentSeq::from_values(MomentKind::Falling, values.clone());
        let forward = stirling_transform(&seq, &rho, 10).map_err(|e| e.to_string())?;
        let back = inverse_stirling_transform(&forward, &rho, 10).map_err(|e| e.to_string())?;
        for s in 1..=10 {
            let got = back.get(s).map_err(|e| e.to_string())?;
            ensure(got == values[s - 1], || format!("round trip {case} differs at s={s}"))?;
        }
    }
    Ok("Bell numbers 1..203 match enumeration; 100 inverse round trips exact".into())
}

fn criterion_2() -> Verdict {
    let mut worst_gamma = 0f64;
    let mut worst_sum = 0f64;
    for shape in [1.0, 2.0, 3.5] {
        for rho in [0.5, 1.0, 2.0] {
            let mp = MixedPoisson64::new(MixingLaw::gamma(shape, 1.0).map_err(|e| e.to_string())?, rho).map_err(|e| e.to_string())?;
            for ell in 0..=20 {
                let closed = mp.pmf_closed(ell).map_err(|e| e.to_string())?;
                let series = mp.pmf_series(ell).map_err(|e| e.to_string())?;
                let quad = mp.pmf_quadrature(ell).map_err(|e| e.to_string())?;
                worst_gamma = worst_gamma.max((closed - series).abs()).max((closed - quad).abs()).max((series - quad).abs());
            }
            let total = mp.pmf_normalization(200).map_err(|e| e.to_string())?;
            worst_sum = worst_sum.max((total - 1.0).abs());
        }
    }
    ensure(worst_gamma <= 1e-9, || format!("gamma pmf disagreement {worst_gamma:.3e}"))?;
    let mut worst_rayleigh = 0f64;
    for rho in [0.5, 1.0, 2.0] {
        let mp = MixedPoisson64::new(MixingLaw::rayleigh(1.0).map_err(|e| e.to_string())?, rho).map_err(|e| e.to_string())?;
        for ell in 0..=20 {
            let closed = mp.pmf_closed(ell).map_err(|e| e.to_string())?;
            let quad = mp.pmf_quadrature(ell).map_err(|e| e.to_string())?;
            worst_rayleigh = worst_rayleigh.max((closed - quad).abs());
        }
        let total = mp.pmf_normalization(200).map_err(|e| e.to_string())?;
        worst_sum = worst_sum.max((total - 1.0).abs());
    }
    ensure(worst_rayleigh <= 1e-10, || format!("Rayleigh closed vs quadrature {worst_rayleigh:.3e}"))?;
    ensure(worst_sum <= 1e-9, || format!("pmf mass defect {worst_sum:.3e}"))?;
    Ok(format!(
        "gamma three-way {worst_gamma:.1e}, Rayleigh {worst_rayleigh:.1e}, mass defect {worst_sum:.1e}"
    ))
}

fn criterion_3() -> Verdict {
    let mut comparisons = 0;
    let mut instances = 0;
    for spec in oracle_suite() {
        let (_, summary) = oracle_compare(&spec, &spec.parts(), 3).map_err(|e| format!("{spec:?}: {e}"))?;
        comparisons += summary.comparisons;
        instances += 1;
        if let Some(c) = summary.counterexample {
            return Err(format!("{spec:?} at part {} s={}: exact {} vs oracle {}", c.j, c.s, c.exact, c.oracle));
        }
    }
    Ok(format!("{comparisons} exact rational comparisons over {instances} model instances"))
}

fn criterion_4() -> Verdict {
    for n in 1..=5u64 {
        let parking = enumerate_all(&ModelSpec::Parking { n, j: 1 }).map_err(|e| e.to_string())?;
        let cutting = enumerate_all(&ModelSpec::Edgecut { n: n + 1, j: 1 }).map_err(|e| e.to_string())?;
        ensure(parking == cutting, || format!("n={n}: parking increments differ from edge cuts on size {}", n + 1))?;
        let pfs = parking_functions(n as usize);
        let forests_expected = (n + 1).pow(n as u32 - 1) as usize;
        ensure(pfs.len() == forests_expected, || format!("n={n}: {} parking functions", pfs.len()))?;
        let mut forests = BTreeSet::new();
        for pf in &pfs {
            let forest = parking_to_forest(pf).map_err(|e| e.to_string())?;
            ensure(forest.size() == n as usize + 1 && forest.root() == 0, || format!("{pf:?}: malformed forest"))?;
            let increments = parking_increments(pf).map_err(|e| e.to_string())?;
            ensure(forest_record_subtrees(&forest) == increments, || format!("{pf:?}: records differ from increments"))?;
            forests.insert(forest);
        }
        ensure(forests.len() == forests_expected, || format!("n={n}: map is not injective"))?;
    }
    Ok("distributions equal for n<=5; forest map bijective with matching record subtrees".into())
}

fn params(pairs: &[(&str, Rational)]) -> Params {
    let mut p = Params::default();
    for (k, v) in pairs {
        p.set(k, v.clone()).expect("known parameter");
    }
    p
}

fn criterion_5() -> Verdict {
    let half = rational(1, 2);
    let cases: Vec<(&str, Params, Vec<u64>, u32)> = vec![
        ("records", params(&[("n", int(500)), ("j", int(1))]), vec![1, 2, 5], 2),
        ("bridge", params(&[("n", int(500)), ("j", int(1))]), vec![1, 2, 3], 2),
        ("mapping", params(&[("n", int(500)), ("j", int(1))]), vec![1, 2], 2),
        (
            "triangular",
            params(&[("n", int(500)), ("w0", int(1)), ("b0", int(1)), ("alpha", int(1)), ("beta", int(1))]),
            vec![0],
            2,
        ),
        ("crp", params(&[("n", int(500)), ("j", int(1)), ("a", half.clone()), ("theta", half)]), vec![1, 2], 1),
    ];
    let mut worst = 0f64;
    let mut rows = 0;
    for (i, (tag, p, parts, smax)) in cases.into_iter().enumerate() {
        let mut cfg = ExperimentConfig::new(tag, &p, Mode::Mc).map_err(|e| e.to_string())?;
        cfg.parts = parts;
        cfg.smax = smax;
        cfg.replicates = 100_000;
        cfg.seed = 500 + i as u64;
        let report = run(&cfg).map_err(|e| e.to_string())?;
        for r in &report.rows {
            let z = r.z.ok_or_else(|| format!("{tag} j={} s={}: no z-score", r.j, r.s))?;
            worst = worst.max(z.abs());
            rows += 1;
            ensure(z.abs() <= 4.0, || format!("{tag} j={} s={}: z = {z:.2}", r.j, r.s))?;
        }
    }
    Ok(format!("{rows} rows, max |z| = {worst:.2}"))
}

fn limit_report(tag: &str, p: Params, replicates: u64, seed: u64) -> Result<mixpois::harness::ExperimentReport, String> {
    let mut cfg = ExperimentConfig::new(tag, &p, Mode::LimitCheck).map_err(|e| e.to_string())?;
    cfg.replicates = replicates;
    cfg.seed = seed;
    cfg.smax = 1;
    run(&cfg).map_err(|e| e.to_string())
}

fn criterion_6() -> Verdict {
    // Smallest n with the mapping scale for j = 2 inside [0.9, 1.1].
    let n = (2..)
        .find(|&n| {
            let lambda = ModelSpec::Mapping { n, j: 2 }.scale().expect("valid").lambda;
            (0.9..=1.1).contains(&lambda)
        })
        .expect("scale grows without bound");
    let mapping = limit_report("mapping", params(&[("n", int(n as i64)), ("j", int(2))]), 100_000, 61)?;
    let tv_map = mapping.limit.as_ref().and_then(|l| l.tv).ok_or("mapping: no TV")?;
    ensure(mapping.scale.as_ref().is_some_and(|s| s.regime == "finite-rho"), || "mapping not in finite regime".into())?;
    ensure(tv_map <= 0.05, || format!("mapping n={n}: TV {tv_map:.4}"))?;

    let desc = limit_report("descendants", params(&[("n", int(1000)), ("j", int(500))]), 100_000, 62)?;
    let tv_desc = desc.limit.as_ref().and_then(|l| l.tv).ok_or("descendants: no TV")?;
    ensure(tv_desc <= 0.05, || format!("descendants: TV {tv_desc:.4}"))?;

    let records = limit_report("records", params(&[("n", int(10_000)), ("j", int(1))]), 20_000, 63)?;
    let moments = &records.limit.as_ref().ok_or("records: no limit summary")?.scaled_moments;
    ensure(records.scale.as_ref().is_some_and(|s| s.regime == "to-infinity"), || "records not in the infinite regime".into())?;
    ensure(moments.len() == 2 && moments.iter().all(|m| (m.ratio - 1.0).abs() <= 0.05), || {
        format!("records scaled moments {moments:?}")
    })?;
    Ok(format!(
        "mapping n={n} TV {tv_map:.4}; descendants TV {tv_desc:.4}; records scaled moment ratios {:.4}, {:.4}",
        moments[0].ratio, moments[1].ratio
    ))
}

fn criterion_7() -> Verdict {
    let one = int(1);
    let specs = [
        (ModelSpec::Records { n: 10_000, j: 1 }, 0.05),
        (ModelSpec::Mapping { n: 10_000, j: 1 }, 0.05),
        (ModelSpec::Bridge { n: 10_000, j: 1 }, 0.05),
        (ModelSpec::Blocks { n: 10_000, k: 2, ell: 2 }, 0.05),
        (ModelSpec::Descendants { n: 10_000, j: 100, family: TreeFamily::Rect }, 0.05),
        (ModelSpec::Nodedeg { n: 10_000, j: 100, alpha: one }, 0.05),
        (ModelSpec::Edgecut { n: 10_000, j: 1 }, 0.15),
    ];
    let mut ratios = Vec::new();
    for (spec, tol) in specs {
        let fm = spec.factorial_moment_f64(1).map_err(|e| e.to_string())?;
        let info = spec.scale().map_err(|e| e.to_string())?;
        let ratio = fm / (info.lambda * info.mixing.moment(1));
        ensure((ratio - 1.0).abs() <= tol, || format!("{}: ratio {ratio:.4}", spec.tag()))?;
        ratios.push(format!("{} {ratio:.4}", spec.tag()));
    }
    Ok(ratios.join(", "))
}

/// The rising moment as a ratio of Pochhammer symbols, the finite form of
/// the Γ-function expression.
fn gamma_form(n: u64, w0: u64, b0: u64, alpha: u64, beta: u64, s: u32) -> Rational {
    let gamma = (alpha + beta) as i64;
    let t0 = (w0 + b0) as i64;
    let lifted = rational(t0 + alpha as i64 * i64::from(s), gamma);
    let base = rational(t0, gamma);
    let steps = u32::try_from(n).expect("small n");
    rising(&lifted, steps) / rising(&base, steps) * rising(&rational(w0 as i64, alpha as i64), s)
}

fn criterion_8() -> Verdict {
    let mut checked = 0;
    for (alpha, beta, w0, b0) in TRIANGULAR_ORACLE_SET {
        for n in 0..=5u64 {
            let dist = enumerate_all(&ModelSpec::Triangular { n, w0, b0, alpha, beta }).map_err(|e| e.to_string())?;
            let shift = rational(w0 as i64, alpha as i64);
            for s in 1..=3u32 {
                let formula: Rational = triangular_rising_fm(n, w0, b0, alpha, beta, s);
                let oracle: Rational = dist
                    .iter()
                    .map(|(o, p)| match o {
                        Outcome::Value(x) => rising(&(int(*x) + &shift), s) * p,
                        Outcome::Sizes(_) => unreachable!("urns report a single count"),
                    })
                    .sum();
                ensure(formula == gamma_form(n, w0, b0, alpha, beta, s) && formula == oracle, || {
                    format!("(alpha,beta,w0,b0)=({alpha},{beta},{w0},{b0}) n={n} s={s}")
                })?;
                checked += 1;
            }
        }
    }
    let parameter_sets = [(1, 1, 1, 1), (2, 1, 1, 1), (1, 2, 3, 1), (3, 1, 2, 5), (2, 3, 1, 0)];
    for (alpha, beta, w0, b0) in parameter_sets {
        let gamma = (alpha + beta) as i64;
        let t0 = (w0 + b0) as i64;
        for n in 0..=100u64 {
            let top = int(n as i64 - 1) + rational(t0 + alpha as i64, gamma);
            let bottom = int(n as i64 - 1) + rational(t0, gamma);
            let displayed = gen_binomial(&top, n) / gen_binomial(&bottom, n) * rational(w0 as i64, alpha as i64);
            let mean: Rational = triangular_fm(n, w0, b0, alpha, beta, 1).map_err(|e| e.to_string())?;
            ensure(mean + rational(w0 as i64, alpha as i64) == displayed, || {
                format!("martingale mean at (alpha,beta,w0,b0)=({alpha},{beta},{w0},{b0}) n={n}")
            })?;
        }
    }
    Ok(format!("{checked} rising moments three ways; martingale mean for n<=100 on 5 parameter sets"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("transform correctness", criterion_1),
        ("mixed Poisson engine", criterion_2),
        ("exact vs oracle", criterion_3),
        ("parking and edge-cut equivalence", criterion_4),
        ("Monte Carlo consistency", criterion_5),
        ("limit-law dichotomy", criterion_6),
        ("asymptotic scale", criterion_7),
        ("triangular urn moments", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
