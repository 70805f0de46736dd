use super::cayley::kernel_by_series;
use super::*;
use crate::numerics::rational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    rational(n, d)
}

fn exact(spec: &ModelSpec, s: u32) -> Rational {
    spec.factorial_moment(s).unwrap().exact().unwrap().clone()
}

#[test]
fn small_examples() {
    assert_eq!(blocks_fm::<Rational>(2, 2, 1, 1), q(4, 3));
    assert_eq!(blocks_fm::<Rational>(2, 2, 2, 1), q(1, 3));
    assert_eq!(blocks_fm::<Rational>(2, 2, 2, 0), q(1, 1));
    assert_eq!(dimurn_fm::<Rational>(1, 1, 1, 1, 1), q(1, 2));
    assert_eq!(dimurn_fm::<Rational>(2, 1, 1, 1, 1), q(1, 1));
    assert_eq!(dimurn_fm::<Rational>(2, 3, 1, 2, 3), q(0, 1));
    assert_eq!(descendants_fm::<Rational>(3, 2, 1, &q(0, 1)), q(1, 2));
    assert_eq!(descendants_fm::<Rational>(4, 4, 2, &q(-1, 2)), q(0, 1));
    assert_eq!(nodedeg_fm::<Rational>(3, 2, 1, &q(1, 1)), q(1, 3));
    assert_eq!(nodedeg_fm::<Rational>(7, 7, 1, &q(3, 2)), q(0, 1));
    assert_eq!(nodedeg_fm::<Rational>(5, 3, 0, &q(1, 1)), q(1, 1));
    assert_eq!(branches_fm::<Rational>(2, 1, 1, 1, &q(1, 1)), q(1, 1));
    assert_eq!(branches_fm::<Rational>(3, 1, 2, 2, &q(1, 1)), q(0, 1));
    assert_eq!(crp_params(&q(1, 2), &q(1, 2)), (q(1, 1), q(1, 1)));
    assert_eq!(crp_fm::<Rational>(1, 1, 1, &q(1, 1), &q(1, 1)), q(1, 1));
    assert_eq!(crp_fm::<Rational>(2, 1, 1, &q(1, 1), &q(1, 1)), q(4, 3));
    assert_eq!(triangular_rising_fm::<Rational>(1, 1, 1, 1, 1, 1), q(3, 2));
    assert_eq!(triangular_rising_fm::<Rational>(0, 3, 2, 1, 2, 2), q(12, 1));
    assert_eq!(bridge_fm::<Rational>(2, 1, 1), q(4, 3));
    assert_eq!(bridge_fm::<Rational>(2, 2, 1), q(1, 3));
    assert_eq!(bridge_fm::<Rational>(3, 2, 2), q(0, 1));
    assert_eq!(records_fm(2, 1, 1).unwrap(), q(1, 1));
    assert_eq!(records_fm(2, 2, 1).unwrap(), q(1, 2));
    assert_eq!(records_fm(7, 3, 0).unwrap(), q(1, 1));
    assert_eq!(edgecut_fm(2, 1, 1).unwrap(), q(1, 1));
    assert_eq!(edgecut_fm(3, 1, 1).unwrap(), q(4, 3));
    assert_eq!(edgecut_fm(3, 2, 1).unwrap(), q(1, 3));
    assert_eq!(parking_fm(2, 1, 1).unwrap(), q(4, 3));
    assert_eq!(parking_fm(2, 2, 1).unwrap(), q(1, 3));
    assert_eq!(mapping_fm(2, 1, 1).unwrap(), q(1, 1));
    assert_eq!(mapping_fm(2, 2, 1).unwrap(), q(1, 2));
}

#[test]
fn inversions_main_term() {
    assert_eq!(inversions_fm(9, 3, 0, 0.7), 1.0);
    assert_eq!(inversions_fm(9, 9, 2, 0.7), 0.0);
    let (n, j, kappa) = (40u64, 5u64, 1.5);
    let expect = (2.0 / kappa) * ((n - j) * (n - j - 1)) as f64 / n as f64;
    assert!((inversions_fm(n, j, 2, kappa) - expect).abs() < 1e-12 * expect);
    let spec = ModelSpec::Inversions { n, j, kappa };
    assert!(spec.factorial_moment(2).unwrap().is_asymptotic());
}

#[test]
fn edgecut_order_limit_and_cap() {
    assert_eq!(
        edgecut_fm_with_order(12, 1, 1, 10),
        Err(Error::SeriesOrderExceeded { needed: 12, order: 10 })
    );
    assert!(edgecut_fm(5, 1, EDGECUT_MAX_ORDER + 1).is_err());
    assert!(edgecut_fm(5, 5, 1).is_err());
}

#[test]
fn closed_kernel_matches_series() {
    for m in 0..12 {
        for a in 1..5 {
            assert_eq!(tree_kernel(m, a), kernel_by_series(m, a), "m={m} a={a}");
        }
    }
}

#[test]
fn records_and_mapping_share_their_kernel() {
    for n in 1..=50u64 {
        for j in [1, 2, 3, n / 2 + 1, n] {
            if j == 0 || j > n {
                continue;
            }
            for s in 0..4 {
                assert_eq!(records_fm(n, j, s).unwrap(), mapping_fm(n, j, s).unwrap());
            }
        }
    }
}

#[test]
fn vanishing_beyond_the_available_size() {
    for s in 1..5u32 {
        for n in 1..10u64 {
            for j in 1..=n {
                let over = n < j * u64::from(s);
                assert_eq!(blocks_fm::<Rational>(n, 2, j, s).is_zero(), over);
                assert_eq!(records_fm(n, j, s).unwrap().is_zero(), over);
                assert_eq!(mapping_fm(n, j, s).unwrap().is_zero(), over);
                assert_eq!(bridge_fm::<Rational>(n, j, s).is_zero(), over);
            }
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn double_paths_agree_with_exact() {
    let specs = [
        ModelSpec::Records { n: 60, j: 2 },
        ModelSpec::Mapping { n: 45, j: 1 },
        ModelSpec::Edgecut { n: 30, j: 2 },
        ModelSpec::Parking { n: 25, j: 1 },
        ModelSpec::Bridge { n: 70, j: 3 },
        ModelSpec::Blocks { n: 40, k: 3, ell: 2 },
        ModelSpec::Descendants { n: 40, j: 7, family: TreeFamily::Gport(q(3, 2)) },
        ModelSpec::Nodedeg { n: 40, j: 6, alpha: q(1, 1) },
        ModelSpec::Branches { n: 30, j: 2, k: 3, alpha: q(2, 1) },
        ModelSpec::Crp { n: 30, j: 2, a: q(1, 3), theta: q(1, 2) },
        ModelSpec::Triangular { n: 30, w0: 2, b0: 9, alpha: 2, beta: 1 },
        ModelSpec::Dimurn { n: 12, m: 9, alpha: 2, delta: 3 },
    ];
    for spec in &specs {
        for s in 1..=3 {
            let e = Scalar::to_f64(&exact(spec, s));
            let f = spec.factorial_moment_f64(s).unwrap();
            assert!(rel(f, e) < 1e-10, "{spec:?} s={s}: {f} vs {e}");
        }
    }
}

#[test]
fn descendants_family_from_ratio() {
    assert_eq!(TreeFamily::from_weight_ratio(&q(0, 1)).unwrap(), TreeFamily::Rect);
    assert_eq!(TreeFamily::from_weight_ratio(&q(-1, 2)).unwrap(), TreeFamily::Gport(q(1, 1)));
    assert_eq!(TreeFamily::from_weight_ratio(&q(1, 2)).unwrap(), TreeFamily::Dary(3));
    assert!(TreeFamily::from_weight_ratio(&q(2, 3)).is_err());
    for f in [TreeFamily::Rect, TreeFamily::Gport(q(5, 2)), TreeFamily::Dary(4)] {
        assert_eq!(TreeFamily::from_weight_ratio(&f.weight_ratio()).unwrap(), f);
    }
}

#[test]
fn scale_examples() {
    let rec = ModelSpec::Records { n: 1_000_000, j: 1 }.scale().unwrap();
    assert!((rec.lambda - 1000.0 / std::f64::consts::E).abs() < 1e-9);
    assert_eq!(rec.regime, Regime::ToInfinity);
    let urn = ModelSpec::Dimurn { n: 7, m: 7, alpha: 1, delta: 1 }.scale().unwrap();
    assert_eq!(urn.lambda, 1.0);
    assert_eq!(urn.regime, Regime::FiniteRho);
    let d = ModelSpec::Descendants { n: 9, j: 9, family: TreeFamily::Rect }.scale().unwrap();
    assert_eq!(d.lambda, 0.0);
    assert_eq!(d.regime, Regime::Degenerate);
    let b = ModelSpec::Bridge { n: 100, j: 2 }.scale().unwrap();
    let expect = 2.0 * 2f64.sqrt() * 2.0 * 10.0 / (2.0 * 16.0);
    assert!((b.lambda - expect).abs() < 1e-12);
}

#[test]
fn from_params_and_validation() {
    let mut p = Params::default();
    p.set("n", q(5, 1)).unwrap();
    p.set("j", q(2, 1)).unwrap();
    assert_eq!(ModelSpec::from_params("records", &p).unwrap(), ModelSpec::Records { n: 5, j: 2 });
    assert_eq!(
        ModelSpec::from_params("descendants", &p).unwrap(),
        ModelSpec::Descendants { n: 5, j: 2, family: TreeFamily::Rect }
    );
    assert!(matches!(ModelSpec::from_params("nope", &p), Err(Error::UnknownModel(_))));
    p.set("a", q(1, 2)).unwrap();
    p.set("theta", q(-1, 4)).unwrap();
    assert!(ModelSpec::from_params("crp", &p).is_err());
    p.set("theta", q(1, 2)).unwrap();
    let crp = ModelSpec::from_params("crp", &p).unwrap();
    assert_eq!(crp.crp_growth().unwrap(), (q(1, 1), q(1, 1)));
    assert!(ModelSpec::Edgecut { n: 4, j: 4 }.validate().is_err());
    assert!(ModelSpec::Nodedeg { n: 4, j: 1, alpha: q(1, 1) }.validate().is_err());
    let mut t = Params::default();
    for (k, v) in [("n", 3), ("w0", 1), ("b0", 1), ("alpha", 1), ("beta", 1), ("gamma", 3)] {
        t.set(k, q(v, 1)).unwrap();
    }
    assert!(ModelSpec::from_params("triangular", &t).is_err());
    assert_eq!(MODEL_TAGS.len(), 13);
}

proptest! {
    #[test]
    fn triangular_zero_draws_is_the_initial_rising_factorial(w0 in 1u64..6, b0 in 0u64..6, alpha in 1u64..4, beta in 0u64..4, s in 0u32..5) {
        let v: Rational = triangular_rising_fm(0, w0, b0, alpha, beta, s);
        prop_assert_eq!(v, crate::numerics::rising(&q(w0 as i64, alpha as i64), s));
    }

    #[test]
    fn moments_are_non_negative(n in 1u64..12, j in 1u64..12, s in 0u32..4) {
        prop_assume!(j <= n);
        prop_assert!(!records_fm(n, j, s).unwrap().is_negative());
        prop_assert!(!bridge_fm::<Rational>(n, j, s).is_negative());
        prop_assert!(!descendants_fm::<Rational>(n, j, s, &q(-1, 3)).is_negative());
        prop_assert!(!crp_fm::<Rational>(n, j, s, &q(2, 1), &q(1, 2)).is_negative());
    }
}
