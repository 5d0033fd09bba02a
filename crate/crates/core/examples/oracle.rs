//! Exact optimum of small random instances under both route semantics,
//! next to the external solver's optimum of each model when one is found.
//!
//! `cargo run --release --example oracle [-- COUNT]`

use std::time::Instant;

use ppdsp::encode::Formulation;
use ppdsp::fixtures::small_random;
use ppdsp::harness::{oracle, solve, OracleOptions, Semantics, SolverAdapter};
use ppdsp::LoadRule;

fn main() {
    let count: usize = std::env::args().nth(1).map_or(5, |s| s.parse().expect("COUNT"));
    let adapter = SolverAdapter::detect();
    let location = OracleOptions { load_rule: LoadRule::Netted, transit_probe: true, ..Default::default() };
    let instances = (0u64..).filter_map(|s| small_random(s).ok().map(|i| (s, i))).take(count);
    for (seed, inst) in instances {
        let t = Instant::now();
        let loc = oracle(&inst, Semantics::Location, &location).unwrap();
        let req = oracle(&inst, Semantics::Request, &OracleOptions::default()).unwrap();
        print!(
            "seed {seed:>3} |V|={} n={} oracle loc={:.4} req={:.4} ({:.2}s)",
            inst.num_nodes(),
            inst.requests().len(),
            loc.value,
            req.value,
            t.elapsed().as_secs_f64()
        );
        if let Some(a) = &adapter {
            for f in Formulation::ALL {
                match solve(&inst, f, a, 60) {
                    Ok(o) => print!("  {} {f}={:.4} ({:.2}s)", a.name, o.objective.unwrap_or(f64::NAN), o.wall_time_s),
                    Err(e) => print!("  {f}: {e}"),
                }
            }
        }
        println!();
    }
}
