use std::process::{Command, Output};

fn mixpois(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixpois")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exact_records_row() {
    let o = mixpois(&["exact", "--model", "records", "--n", "2", "--j", "1", "--smax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "model,n,j,s,exact,estimate,stderr,z\nrecords,2,1,0,1,,,\nrecords,2,1,1,1,,,\n");
}

#[test]
fn list_models_has_thirteen_tags() {
    let o = mixpois(&["list-models"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 13);
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--model", "bridge", "--n", "2", "--j", "1", "--replicates", "1000", "--seed", "7", "--format", "json"];
    let a = mixpois(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, mixpois(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(mixpois(&["exact", "--model", "records", "--n", "2", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(mixpois(&["exact", "--model", "nosuch", "--n", "2"]).status.code(), Some(2));
    assert_eq!(mixpois(&["exact", "--n", "2"]).status.code(), Some(2));
    assert_eq!(mixpois(&["exact", "--model", "records", "--n", "2", "--j", "5"]).status.code(), Some(1));
    assert_eq!(mixpois(&["simulate", "--model", "records", "--n", "5", "--j", "1", "--replicates", "0"]).status.code(), Some(2));
}

#[test]
fn oracle_check_passes() {
    let o = mixpois(&["oracle-check", "--model", "parking", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle agrees on all 12 comparisons"));
}

#[test]
fn config_file_and_output_path() {
    let dir = std::env::temp_dir().join(format!("mixpois-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("exp.json");
    let out = dir.join("report.json");
    std::fs::write(&cfg, r#"{"schema":1,"model":"bridge","params":{"n":2,"j":1},"mode":"exact","smax":1}"#).unwrap();
    let o = mixpois(&["exact", "--config", cfg.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["rows"][1]["exact"]["rational"], "4/3");
    std::fs::write(&cfg, r#"{"schema":1,"model":"bridge","params":{"n":2},"mode":"exact","colour":1}"#).unwrap();
    assert_eq!(mixpois(&["exact", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
