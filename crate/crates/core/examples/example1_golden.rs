//! Example 1: every feasible solution with its value, then the optimum.
//!
//! `cargo run --example example1_golden [-- --write data/example1.instance]`

use ppdsp::fixtures::example1;
use ppdsp::format::serialize_instance;
use ppdsp::harness::{enumerate_xi, oracle, OracleLimits, OracleOptions, Semantics};
use ppdsp::LoadRule;

fn main() {
    let instance = example1();
    let args: Vec<String> = std::env::args().collect();
    if let Some(i) = args.iter().position(|a| a == "--write") {
        let path = args.get(i + 1).expect("--write needs a path");
        std::fs::write(path, serialize_instance(&instance)).expect("write instance");
        println!("wrote {path}");
    }

    let all = enumerate_xi(&instance, LoadRule::PickupFirst, &OracleLimits::default()).unwrap();
    for (solution, value) in &all {
        let parts: Vec<String> = solution
            .plans
            .iter()
            .map(|p| format!("t{}:{:?} {:?}", p.truck, p.delivery, p.route))
            .collect();
        println!("{value:>4}  {}", parts.join("  "));
    }
    println!("{} feasible solutions", all.len());

    for (semantics, rule) in [
        (Semantics::Location, LoadRule::PickupFirst),
        (Semantics::Location, LoadRule::Netted),
        (Semantics::Request, LoadRule::PickupFirst),
    ] {
        let options = OracleOptions { load_rule: rule, ..Default::default() };
        let best = oracle(&instance, semantics, &options).unwrap();
        println!("optimum ({semantics}, {rule}) = {}", best.value);
    }
}
