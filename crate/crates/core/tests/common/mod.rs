#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use ppdsp::fixtures::small_random;
use ppdsp::instgen::{parse_tsplib, TsplibSample};
use ppdsp::Instance;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn sample(name: &str) -> TsplibSample {
    let path = data_dir().join(format!("{name}.tsp"));
    parse_tsplib(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn ppdsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppdsp"))
        .args(["--log", "warn"])
        .args(args)
        .output()
        .expect("run ppdsp")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// The first `count` seeds for which the small random generator succeeds.
pub fn random_suite(count: usize) -> Vec<(u64, Instance)> {
    (0u64..)
        .filter_map(|seed| small_random(seed).ok().map(|inst| (seed, inst)))
        .take(count)
        .collect()
}

/// Path of the CBC binary the harness would use, if any.
pub fn cbc_binary() -> Option<PathBuf> {
    let adapter = ppdsp::harness::SolverAdapter::detect_all().into_iter().find(|a| a.name == "cbc")?;
    shlex::split(&adapter.template)?.first().map(PathBuf::from)
}

pub fn has_highspy() -> bool {
    Command::new("python3").args(["-c", "import highspy"]).output().is_ok_and(|o| o.status.success())
}
