//! Build an experiment config in code, run it, and print the report.

use ait_workbench::harness::{parse_config, run_experiment, to_fixed_json, RunContext};

fn main() {
    let cfg = parse_config(r#"{"experiment": "cls-typical", "n": 10, "eps": 0.1}"#)
        .and_then(|c| c.prepare(std::path::Path::new(".")))
        .expect("valid config");
    let ctx = RunContext { jobs: 1, cache_dir: std::env::temp_dir() };
    let report = run_experiment(&cfg, &ctx).expect("runs");
    for a in &report.assertions {
        println!("{}: {} ({})", a.name, if a.passed { "ok" } else { "FAILED" }, a.detail);
    }
    println!("{}", to_fixed_json(&report));
}
