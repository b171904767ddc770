//! Runs every program in `examples/`. Cargo builds them before the test
//! binaries, next to `deps/`.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: &[&str] = &[
    "programs",
    "codes",
    "program_search",
    "entropy_rates",
    "classical_brudno",
    "af_entropy",
    "typical_subspace",
    "gacs_complexity",
    "quantum_brudno",
    "experiment_config",
];

fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

#[test]
fn every_example_runs() {
    let dir = examples_dir();
    let listed: Vec<String> = std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/examples"))
        .unwrap()
        .map(|e| e.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    for name in &listed {
        assert!(EXAMPLES.contains(&name.as_str()), "{name} is not in the list");
    }
    for name in EXAMPLES {
        let bin = dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        if !bin.exists() {
            // `cargo test --test examples` alone does not build examples
            eprintln!("skipping {name}: {} not built", bin.display());
            continue;
        }
        let out = Command::new(&bin).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
