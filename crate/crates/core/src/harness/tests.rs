use super::*;
use crate::exact::Params;

fn params(pairs: &[(&str, i64)]) -> Params {
    let mut p = Params::default();
    for (k, v) in pairs {
        p.set(k, Rational::from_integer((*v).into())).unwrap();
    }
    p
}

#[test]
fn exact_records_sweeps_parts() {
    let mut cfg = ExperimentConfig::new("records", &params(&[("n", 2)]), Mode::Exact).unwrap();
    cfg.smax = 1;
    let report = run(&cfg).unwrap();
    let cells: Vec<(u64, u32, String)> = report
        .rows
        .iter()
        .map(|r| (r.j, r.s, r.exact.as_ref().unwrap().rational.clone().unwrap()))
        .collect();
    assert_eq!(
        cells,
        vec![(1, 0, "1/1".into()), (1, 1, "1/1".into()), (2, 0, "1/1".into()), (2, 1, "1/2".into())]
    );
    let csv = report.to_csv();
    assert!(csv.starts_with("model,n,j,s,exact,estimate,stderr,z\nrecords,2,1,0,1,,,\n"));
    assert!(csv.contains("records,2,2,1,0.5,,,\n"));
}

#[test]
fn exact_bridge_value() {
    let cfg = ExperimentConfig::new("bridge", &params(&[("n", 2), ("j", 1)]), Mode::Exact).unwrap();
    let report = run(&cfg).unwrap();
    assert_eq!(report.rows[1].exact.as_ref().unwrap().rational.as_deref(), Some("4/3"));
    assert_eq!(report.rows[1].exact.as_ref().unwrap().decimal, "1.33333333333");
}

#[test]
fn deterministic_statistic_has_zero_stderr() {
    let mut cfg = ExperimentConfig::new("edgecut", &params(&[("n", 2), ("j", 1)]), Mode::Mc).unwrap();
    cfg.replicates = 200;
    cfg.smax = 1;
    let report = run(&cfg).unwrap();
    assert_eq!(report.rows[0].estimate, Some(1.0));
    assert_eq!(report.rows[0].stderr, Some(0.0));
    assert_eq!(report.rows[0].z, Some(0.0));
    assert!(report.pass);
}

#[test]
fn config_validation() {
    let mut cfg = ExperimentConfig::new("records", &params(&[("n", 5), ("j", 1)]), Mode::Mc).unwrap();
    cfg.replicates = 0;
    assert!(matches!(run(&cfg), Err(Error::Config(_))));
    cfg.replicates = 10;
    cfg.smax = 7;
    assert!(matches!(run(&cfg), Err(Error::Config(_))));
    let open = ExperimentConfig::new("records", &params(&[("n", 5)]), Mode::LimitCheck).unwrap();
    assert!(matches!(run(&open), Err(Error::Config(_))));
    assert!(matches!(ExperimentConfig::new("nosuch", &params(&[("n", 5)]), Mode::Exact), Err(Error::UnknownModel(_))));
}

#[test]
fn config_file_schema() {
    let text = r#"{"schema":1,"model":"records","params":{"n":500,"j":1},"mode":"mc","replicates":100000,"seed":42,"smax":3}"#;
    let file = ConfigFile::parse(text).unwrap();
    let cfg = ExperimentConfig::from_file(&file).unwrap();
    assert_eq!((cfg.replicates, cfg.seed, cfg.smax, cfg.mode), (100_000, 42, 3, Mode::Mc));
    assert_eq!(cfg.model, ModelSpec::Records { n: 500, j: 1 });
    assert!(ConfigFile::parse(&text.replace("\"smax\"", "\"smx\"")).is_err());
    assert!(ConfigFile::parse(&text.replace("\"schema\":1", "\"schema\":2")).is_err());
    assert!(ConfigFile::parse(&text.replace("\"j\":1", "\"q\":1")).is_err());
}

#[test]
fn same_seed_same_json() {
    let mut cfg = ExperimentConfig::new("bridge", &params(&[("n", 2), ("j", 1)]), Mode::Mc).unwrap();
    cfg.replicates = 1000;
    cfg.seed = 7;
    let a = run(&cfg).unwrap().to_json();
    assert_eq!(a, run(&cfg).unwrap().to_json());
    cfg.seed = 8;
    assert_ne!(a, run(&cfg).unwrap().to_json());
}

#[test]
fn total_variation_basics() {
    let p = [0.2, 0.5, 0.3];
    assert_eq!(total_variation(&p, &p), 0.0);
    assert!((total_variation(&p, &[0.2, 0.5]) - 0.15).abs() < 1e-15);
    assert_eq!(empirical_pmf(&[0, 2, 2, 1]), vec![0.25, 0.25, 0.5]);
}

#[test]
fn degenerate_regime_puts_mass_at_zero() {
    let mut cfg = ExperimentConfig::new("records", &params(&[("n", 100), ("j", 80)]), Mode::LimitCheck).unwrap();
    cfg.replicates = 20_000;
    cfg.smax = 1;
    let report = run(&cfg).unwrap();
    assert_eq!(report.scale.as_ref().unwrap().regime, "degenerate");
    assert!(report.scale.as_ref().unwrap().lambda <= 0.01);
    assert!(report.limit.as_ref().unwrap().mass_at_zero.unwrap() >= 0.99);
    assert!(report.pass);
    assert!(report.warnings[0].starts_with("regime mismatch"));
}

#[test]
fn oracle_check_reports_comparisons() {
    let mut cfg = ExperimentConfig::new("mapping", &params(&[("n", 4)]), Mode::OracleCheck).unwrap();
    cfg.smax = 3;
    let report = run(&cfg).unwrap();
    assert!(report.pass);
    assert_eq!(report.oracle.unwrap().comparisons, 12);
}

#[test]
fn significant_digits() {
    assert_eq!(format_sig(1.0, 12), "1");
    assert_eq!(format_sig(0.5, 12), "0.5");
    assert_eq!(format_sig(-2.0 / 3.0, 12), "-0.666666666667");
    assert_eq!(format_sig(123456789012345.0, 12), "123456789012000");
    assert_eq!(format_sig(1.5e-30, 12), "1.50000000000e-30");
    assert_eq!(format_sig(0.0, 12), "0");
}
