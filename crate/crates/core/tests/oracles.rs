//! Exact factorial moments against exhaustive enumeration, model by model.

use mixpois::exact::ModelSpec;
use mixpois::harness::{oracle_compare, oracle_suite};

fn check(tag: &str) {
    let specs: Vec<ModelSpec> = oracle_suite().into_iter().filter(|s| s.tag() == tag).collect();
    assert!(!specs.is_empty());
    for spec in specs {
        let (_, summary) = oracle_compare(&spec, &spec.parts(), 3).unwrap();
        assert!(summary.counterexample.is_none(), "{spec:?}: {:?}", summary.counterexample);
    }
}

#[test]
fn blocks() {
    check("blocks");
}

#[test]
fn dimurn() {
    check("dimurn");
}

#[test]
fn descendants() {
    check("descendants");
}

#[test]
fn nodedeg() {
    check("nodedeg");
}

#[test]
fn branches() {
    check("branches");
}

#[test]
fn crp() {
    check("crp");
}

#[test]
fn triangular() {
    check("triangular");
}

#[test]
fn records() {
    check("records");
}

#[test]
fn edgecut() {
    check("edgecut");
}

#[test]
fn parking() {
    check("parking");
}

#[test]
fn bridge() {
    check("bridge");
}

#[test]
fn mapping() {
    check("mapping");
}
