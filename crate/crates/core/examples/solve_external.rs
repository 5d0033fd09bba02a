//! Solves an instance file with the first external solver found, then
//! decodes, validates and rescores the answer.
//!
//! `cargo run --release --example solve_external [-- INSTANCE [loc|req] [TIME_LIMIT]]`

use ppdsp::cli::describe_solution;
use ppdsp::encode::Formulation;
use ppdsp::format::parse_instance;
use ppdsp::harness::{solve, SolverAdapter};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/example1.instance").into());
    let formulation: Formulation = args.next().map_or(Formulation::Location, |s| s.parse().expect("formulation"));
    let time_limit: u64 = args.next().map_or(60, |s| s.parse().expect("TIME_LIMIT"));

    let Some(adapter) = SolverAdapter::detect() else {
        eprintln!("no solver found: install cbc or highspy, or set PPDSP_SOLVER_CMD");
        std::process::exit(1);
    };
    let instance = parse_instance(&std::fs::read_to_string(&path).expect("read instance")).expect("parse instance");
    let outcome = solve(&instance, formulation, &adapter, time_limit).expect("solve");
    println!("{} {formulation}: {} objective {:?} xi {:?} in {:.2}s", adapter.name, outcome.status, outcome.objective, outcome.xi, outcome.wall_time_s);
    if let Some(solution) = &outcome.solution {
        print!("{}", describe_solution(solution));
    }
    if !outcome.report.is_clean() {
        println!("{}", outcome.report);
    }
}
